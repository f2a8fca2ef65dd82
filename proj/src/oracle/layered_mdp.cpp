#include "mctslab/oracle/layered_mdp.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "mctslab/mdp.hpp"

namespace mctslab::oracle {

int LayeredMdp::find_state(int depth, const std::string& name) const {
    const auto& layer = layers[static_cast<std::size_t>(depth)];
    for (std::size_t i = 0; i < layer.size(); ++i)
        if (layer[i].name == name)
            return static_cast<int>(i);
    return -1;
}

void LayeredMdp::validate() const {
    if (layers.empty())
        throw InvalidSpec("layered mdp: no layers");
    for (std::size_t d = 0; d < layers.size(); ++d) {
        const bool last = d + 1 == layers.size();
        for (const auto& s : layers[d]) {
            if (s.terminal && !s.actions.empty())
                throw InvalidSpec("layered mdp: terminal state " + s.name + " has actions");
            if (!s.terminal && s.actions.empty())
                throw InvalidSpec("layered mdp: non-terminal state " + s.name + " has no actions");
            if (last && !s.terminal)
                throw InvalidSpec("layered mdp: final layer state " + s.name + " not terminal");
            for (const auto& a : s.actions) {
                if (a.outcomes.empty())
                    throw InvalidSpec("layered mdp: action with no outcomes at " + s.name);
                double mass = 0.0;
                std::vector<bool> seen(layers[d + 1].size(), false);
                for (const auto& t : a.outcomes) {
                    if (t.successor < 0 ||
                        t.successor >= static_cast<int>(layers[d + 1].size()))
                        throw InvalidSpec("layered mdp: dangling successor at " + s.name);
                    if (seen[static_cast<std::size_t>(t.successor)])
                        throw InvalidSpec("layered mdp: duplicate successor at " + s.name);
                    seen[static_cast<std::size_t>(t.successor)] = true;
                    if (t.probability <= 0.0 || t.probability > 1.0)
                        throw InvalidSpec("layered mdp: probability out of range at " + s.name);
                    mass += t.probability;
                }
                if (std::fabs(mass - 1.0) > 1e-9)
                    throw InvalidSpec("layered mdp: probabilities sum to " +
                                      std::to_string(mass) + " at " + s.name);
            }
        }
    }
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
        if (tok[0] == '#')
            break;
        out.push_back(tok);
    }
    return out;
}

}  // namespace

LayeredMdp LayeredMdp::parse(std::istream& in) {
    LayeredMdp mdp;
    // name -> (layer, index); filled during the state pass
    std::map<std::string, std::pair<int, int>> where;
    int current_layer = -1;
    std::string line;
    int line_no = 0;

    auto fail = [&](const std::string& msg) {
        throw ParseError("line " + std::to_string(line_no) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++line_no;
        auto tok = tokenize(line);
        if (tok.empty())
            continue;
        if (tok[0] == "layer") {
            if (tok.size() != 2)
                fail("expected: layer <d>");
            int d = std::stoi(tok[1]);
            if (d != static_cast<int>(mdp.layers.size()))
                fail("layers must be declared in order 0,1,...");
            mdp.layers.emplace_back();
            current_layer = d;
        } else if (tok[0] == "state") {
            if (current_layer < 0)
                fail("state before any layer");
            if (tok.size() < 2 || tok.size() > 3 || (tok.size() == 3 && tok[2] != "terminal"))
                fail("expected: state <id> [terminal]");
            if (where.count(tok[1]))
                fail("duplicate state id " + tok[1]);
            LayeredState s;
            s.name = tok[1];
            s.terminal = tok.size() == 3;
            where[tok[1]] = {current_layer, static_cast<int>(mdp.layers.back().size())};
            mdp.layers.back().push_back(std::move(s));
        } else if (tok[0] == "edge") {
            if (tok.size() < 4)
                fail("expected: edge <state> <action> <succ>:<prob>... r=<reward>");
            auto it = where.find(tok[1]);
            if (it == where.end())
                fail("unknown state " + tok[1]);
            auto [d, idx] = it->second;
            int action = std::stoi(tok[2]);
            auto& st = mdp.layers[static_cast<std::size_t>(d)][static_cast<std::size_t>(idx)];
            if (action != static_cast<int>(st.actions.size()))
                fail("actions of " + tok[1] + " must be declared in order 0,1,...");
            LayeredAction act;
            bool have_reward = false;
            for (std::size_t i = 3; i < tok.size(); ++i) {
                if (tok[i].rfind("r=", 0) == 0) {
                    act.reward = std::stod(tok[i].substr(2));
                    have_reward = true;
                    continue;
                }
                auto colon = tok[i].rfind(':');
                if (colon == std::string::npos)
                    fail("bad outcome token " + tok[i]);
                std::string succ_name = tok[i].substr(0, colon);
                double prob = std::stod(tok[i].substr(colon + 1));
                auto sit = where.find(succ_name);
                if (sit == where.end())
                    fail("unknown successor " + succ_name);
                if (sit->second.first != d + 1)
                    fail("successor " + succ_name + " not in layer " + std::to_string(d + 1));
                act.outcomes.push_back({sit->second.second, prob});
            }
            if (!have_reward)
                fail("missing r=<reward>");
            st.actions.push_back(std::move(act));
        } else {
            fail("unknown directive " + tok[0]);
        }
    }
    mdp.validate();
    return mdp;
}

LayeredMdp LayeredMdp::parse_string(const std::string& text) {
    std::istringstream ss(text);
    return parse(ss);
}

std::string LayeredMdp::serialize() const {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t d = 0; d < layers.size(); ++d) {
        out << "layer " << d << "\n";
        for (const auto& s : layers[d])
            out << "state " << s.name << (s.terminal ? " terminal" : "") << "\n";
    }
    for (std::size_t d = 0; d < layers.size(); ++d) {
        for (const auto& s : layers[d]) {
            for (std::size_t a = 0; a < s.actions.size(); ++a) {
                out << "edge " << s.name << " " << a;
                for (const auto& t : s.actions[a].outcomes)
                    out << " "
                        << layers[d + 1][static_cast<std::size_t>(t.successor)].name << ":"
                        << t.probability;
                out << " r=" << s.actions[a].reward << "\n";
            }
        }
    }
    return out.str();
}

}  // namespace mctslab::oracle
