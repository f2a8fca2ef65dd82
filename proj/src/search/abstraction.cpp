#include "mctslab/search/abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

namespace mctslab::search {

namespace {
constexpr double kTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

std::string to_string(AbstractionVariant v) {
    switch (v) {
        case AbstractionVariant::none: return "none";
        case AbstractionVariant::oga: return "oga";
        case AbstractionVariant::rstate: return "rstate";
        case AbstractionVariant::ipa: return "ipa";
        case AbstractionVariant::conf: return "conf";
        case AbstractionVariant::topn: return "topn";
    }
    return "none";
}

AbstractionVariant variant_from_string(const std::string& name) {
    if (name == "none") return AbstractionVariant::none;
    if (name == "oga") return AbstractionVariant::oga;
    if (name == "rstate") return AbstractionVariant::rstate;
    if (name == "ipa") return AbstractionVariant::ipa;
    if (name == "conf") return AbstractionVariant::conf;
    if (name == "topn") return AbstractionVariant::topn;
    throw InvalidSpec("unknown abstraction variant '" + name + "'");
}

void AbstractionPolicy::validate() const {
    if (eps_a < 0.0 || eps_t < 0.0)
        throw InvalidSpec("abstraction: eps_a and eps_t must be nonnegative");
    if (alpha < 0.0 || alpha > 1.0)
        throw InvalidSpec("abstraction: alpha must be in [0,1]");
    if (lambda_p < 0.0)
        throw InvalidSpec("abstraction: lambda_p must be nonnegative");
    if (p_move < 0.0 || p_move > 1.0)
        throw InvalidSpec("abstraction: p_move must be in [0,1]");
    if (variant == AbstractionVariant::conf && (p_c <= 0.0 || p_c >= 1.0))
        throw InvalidSpec("abstraction: p_c must be in (0,1)");
    if (variant == AbstractionVariant::topn && (n_matches < 1 || n_min < 0))
        throw InvalidSpec("abstraction: topn needs n_matches >= 1 and n_min >= 0");
}

void SearchConfig::validate() const {
    if (iterations < 1)
        throw InvalidSpec("search: iterations must be >= 1");
    if (exploration_c <= 0.0)
        throw InvalidSpec("search: exploration_c must be positive");
    if (sigma_fallback <= 0.0)
        throw InvalidSpec("search: sigma_fallback must be positive");
    if (recency_k < 1)
        throw InvalidSpec("search: recency_k must be >= 1");
    abstraction.validate();
}

AbstractionManager::AbstractionManager(const AbstractionPolicy& policy, int recency_k, Rng* rng)
    : policy_(policy), recency_k_(recency_k), rng_(rng) {
    policy_.validate();
    if (policy_.variant == AbstractionVariant::conf) {
        boost::math::normal_distribution<double> normal;
        conf_z_ = boost::math::quantile(normal, 0.5 + policy_.p_c / 2.0);
    }
}

// ------------------------------------------------------------- lifecycle

AbstractStateNode* AbstractionManager::terminal_group_at(int depth) {
    if (static_cast<int>(terminal_groups_.size()) <= depth)
        terminal_groups_.resize(static_cast<std::size_t>(depth) + 1, nullptr);
    auto*& slot = terminal_groups_[static_cast<std::size_t>(depth)];
    if (!slot) {
        state_pool_.emplace_back();
        slot = &state_pool_.back();
        slot->creation_id = next_state_group_id_++;
        slot->depth = depth;
        slot->terminal_group = true;
        if (static_cast<int>(state_groups_.size()) <= depth)
            state_groups_.resize(static_cast<std::size_t>(depth) + 1);
        state_groups_[static_cast<std::size_t>(depth)].push_back(slot);
    }
    return slot;
}

AbstractStateNode* AbstractionManager::new_state_group(StateNode* s) {
    state_pool_.emplace_back();
    auto* g = &state_pool_.back();
    g->creation_id = next_state_group_id_++;
    g->depth = s->depth;
    g->members.push_back(s);
    g->representative = s;
    g->visits = s->visits;
    g->total_return = s->total_return;
    if (static_cast<int>(state_groups_.size()) <= s->depth)
        state_groups_.resize(static_cast<std::size_t>(s->depth) + 1);
    state_groups_[static_cast<std::size_t>(s->depth)].push_back(g);
    return g;
}

AbstractQNode* AbstractionManager::new_q_group(QNode* q) {
    q_pool_.emplace_back();
    auto* g = &q_pool_.back();
    g->creation_id = next_q_group_id_++;
    g->depth = q->parent->depth;
    g->members.push_back(q);
    g->representative = q;
    g->visits = q->visits;
    g->total_return = q->total_return;
    if (static_cast<int>(q_groups_.size()) <= g->depth)
        q_groups_.resize(static_cast<std::size_t>(g->depth) + 1);
    q_groups_[static_cast<std::size_t>(g->depth)].push_back(g);
    return g;
}

void AbstractionManager::on_state_created(StateNode* s) {
    if (s->state.terminal) {
        auto* g = terminal_group_at(s->depth);
        g->members.push_back(s);
        if (!g->representative)
            g->representative = s;
        s->group = g;
    } else {
        s->group = new_state_group(s);
    }
}

void AbstractionManager::on_q_created(QNode* q) { q->group = new_q_group(q); }

void AbstractionManager::on_backup_q(QNode* q, double signed_return) {
    q->group->visits += 1;
    q->group->total_return += signed_return;
}

void AbstractionManager::on_backup_state(StateNode* s, double player0_return) {
    s->group->visits += 1;
    s->group->total_return += player0_return;
}

// ---------------------------------------------------------------- moves

void AbstractionManager::move_state(StateNode* s, AbstractStateNode* target) {
    auto* old = s->group;
    auto& members = old->members;
    members.erase(std::find(members.begin(), members.end(), s));
    old->visits -= s->visits;
    old->total_return -= s->total_return;
    if (members.empty()) {
        old->alive = false;
        auto& list = state_groups_[static_cast<std::size_t>(old->depth)];
        list.erase(std::find(list.begin(), list.end(), old));
    } else if (old->representative == s) {
        old->representative =
            members[static_cast<std::size_t>(uniform_int(*rng_, static_cast<int>(members.size())))];
    }
    target->members.push_back(s);
    target->visits += s->visits;
    target->total_return += s->total_return;
    s->group = target;
}

void AbstractionManager::move_q(QNode* q, AbstractQNode* target) {
    auto* old = q->group;
    auto& members = old->members;
    members.erase(std::find(members.begin(), members.end(), q));
    old->visits -= q->visits;
    old->total_return -= q->total_return;
    if (members.empty()) {
        old->alive = false;
        auto& list = q_groups_[static_cast<std::size_t>(old->depth)];
        list.erase(std::find(list.begin(), list.end(), old));
    } else if (old->representative == q) {
        old->representative =
            members[static_cast<std::size_t>(uniform_int(*rng_, static_cast<int>(members.size())))];
    }
    target->members.push_back(q);
    target->visits += q->visits;
    target->total_return += q->total_return;
    q->group = target;
}

// ------------------------------------------------------------ predicates

bool AbstractionManager::q_pair_equivalent(const QNode& q1, const QNode& q2) const {
    if (!q1.full || !q2.full)
        throw NotFullyExpanded("q_pair_equivalent: pair not fully expanded");
    if (policy_.eps_a != kInf && std::fabs(q1.reward - q2.reward) > policy_.eps_a + kTol)
        return false;

    // fold both successor lists over the state partition, keyed by the
    // group creation id so the sum order is reproducible
    auto fold = [&](const QNode& q, std::map<std::uint64_t, double>& dist) {
        double max_p = 0.0;
        for (const auto& [node, p] : q.successors)
            max_p = std::max(max_p, p);
        for (const auto& [node, p] : q.successors) {
            if (p < policy_.alpha * max_p)
                continue;
            dist[node->group->creation_id] += p;
        }
    };
    std::map<std::uint64_t, double> d1, d2;
    fold(q1, d1);
    fold(q2, d2);

    double f = 0.0;
    auto it1 = d1.begin();
    auto it2 = d2.begin();
    while (it1 != d1.end() || it2 != d2.end()) {
        if (it2 == d2.end() || (it1 != d1.end() && it1->first < it2->first)) {
            f += std::fabs(it1->second);
            ++it1;
        } else if (it1 == d1.end() || it2->first < it1->first) {
            f += std::fabs(it2->second);
            ++it2;
        } else {
            f += std::fabs(it1->second - it2->second);
            ++it1;
            ++it2;
        }
    }
    return f <= policy_.eps_t + kTol;
}

JSet AbstractionManager::full_jset(const StateNode& s) const {
    JSet j;
    j.kept.resize(s.children.size());
    for (std::size_t a = 0; a < s.children.size(); ++a)
        j.kept[a] = static_cast<ActionIndex>(a);
    j.computed_at_visits = s.visits;
    j.valid = true;
    return j;
}

JSet AbstractionManager::compute_j_ucb(const StateNode& s, double lambda_p,
                                       double sigma) const {
    if (lambda_p == kInf)
        return full_jset(s);
    std::uint64_t parent_visits = 0;
    for (const auto& q : s.children) {
        if (q.visits == 0)
            throw NotFullyExpanded("compute_j_ucb: unvisited child");
        parent_visits += q.visits;
    }
    double q_max = -kInf;
    for (const auto& q : s.children)
        q_max = std::max(q_max, q.q());
    const double lambda = policy_.lambda_p_scaled ? lambda_p * sigma : lambda_p;
    JSet j;
    for (std::size_t a = 0; a < s.children.size(); ++a) {
        if (ucb_value(s.children[a], parent_visits, lambda, StatsSource::ground) >= q_max)
            j.kept.push_back(static_cast<ActionIndex>(a));
    }
    j.computed_at_visits = s.visits;
    j.valid = true;
    return j;
}

JSet AbstractionManager::conf_prune(const StateNode& s, double p_c) const {
    boost::math::normal_distribution<double> normal;
    const double z =
        p_c == policy_.p_c && conf_z_ > 0.0 ? conf_z_ : boost::math::quantile(normal, 0.5 + p_c / 2.0);
    std::vector<double> lo(s.children.size()), hi(s.children.size());
    double best_lo = -kInf;
    for (std::size_t a = 0; a < s.children.size(); ++a) {
        const auto& q = s.children[a];
        if (q.visits == 0)
            throw NotFullyExpanded("conf_prune: unvisited child");
        if (q.visits < 2) {
            lo[a] = -kInf;
            hi[a] = kInf;
        } else {
            const double n = static_cast<double>(q.visits);
            const double mean = q.total_return / n;
            const double var =
                std::max(0.0, (q.total_return_sq - n * mean * mean) / (n - 1.0));
            const double half = z * std::sqrt(var / n);
            lo[a] = mean - half;
            hi[a] = mean + half;
        }
        best_lo = std::max(best_lo, lo[a]);
    }
    JSet j;
    for (std::size_t a = 0; a < s.children.size(); ++a)
        if (hi[a] >= best_lo)
            j.kept.push_back(static_cast<ActionIndex>(a));
    j.computed_at_visits = s.visits;
    j.valid = true;
    return j;
}

JSet AbstractionManager::topn_prune(const StateNode& s, int n_matches, int n_min) const {
    for (const auto& q : s.children)
        if (q.visits == 0)
            throw NotFullyExpanded("topn_prune: unvisited child");
    if (s.visits < static_cast<std::uint32_t>(n_min) ||
        n_matches >= static_cast<int>(s.children.size()))
        return full_jset(s);
    std::vector<ActionIndex> order(s.children.size());
    for (std::size_t a = 0; a < order.size(); ++a)
        order[a] = static_cast<ActionIndex>(a);
    std::stable_sort(order.begin(), order.end(), [&](ActionIndex a, ActionIndex b) {
        return s.children[static_cast<std::size_t>(a)].q() >
               s.children[static_cast<std::size_t>(b)].q();
    });
    order.resize(static_cast<std::size_t>(n_matches));
    std::sort(order.begin(), order.end());
    JSet j;
    j.kept = std::move(order);
    j.computed_at_visits = s.visits;
    j.valid = true;
    return j;
}

JSet AbstractionManager::state_jset(const StateNode& s) const {
    switch (policy_.variant) {
        case AbstractionVariant::ipa:
            return compute_j_ucb(s, policy_.lambda_p, sigma_);
        case AbstractionVariant::conf:
            return conf_prune(s, policy_.p_c);
        case AbstractionVariant::topn:
            return topn_prune(s, policy_.n_matches, policy_.n_min);
        default:
            return full_jset(s);
    }
}

bool AbstractionManager::states_similar(const StateNode& s1, const StateNode& s2,
                                        const JSet& j1, const JSet& j2) const {
    if (&s1 == &s2)
        return true;
    auto matched = [](const StateNode& a, ActionIndex ai, const StateNode& b) {
        const auto* group = a.children[static_cast<std::size_t>(ai)].group;
        for (const auto& q : b.children)
            if (q.group == group)
                return true;
        return false;
    };
    for (ActionIndex a1 : j1.kept)
        if (!matched(s1, a1, s2))
            return false;
    for (ActionIndex a2 : j2.kept)
        if (!matched(s2, a2, s1))
            return false;
    return true;
}

// --------------------------------------------------------------- updates

bool AbstractionManager::update_q_abstraction(QNode* q, bool gated) {
    if (gated) {
        if (++q->recency < recency_k_)
            return false;
        q->recency = 0;
    }
    if (!q->full)
        return false;  // singleton until the distribution is complete

    // largest same-depth group whose representative matches; ties to the
    // lowest creation id; the node's own group qualifies via reflexivity
    AbstractQNode* target = nullptr;
    for (auto* g : q_groups_[static_cast<std::size_t>(q->parent->depth)]) {
        const QNode* rep = g->representative;
        if (rep != q) {
            if (!rep->full || !q_pair_equivalent(*q, *rep))
                continue;
        }
        if (!target || g->size() > target->size() ||
            (g->size() == target->size() && g->creation_id < target->creation_id))
            target = g;
    }
    if (!target) {
        target = new_q_group(q);
        // new_q_group copies the stats; undo the duplicate contribution
        // before the move below re-adds it
        target->members.clear();
        target->visits = 0;
        target->total_return = 0.0;
        target->representative = q;
    }
    if (target == q->group)
        return false;
    if (target->members.empty())
        target->representative = q;
    move_q(q, target);
    update_state_abstraction(q->parent, !policy_.propagate_bypasses_recency);
    return true;
}

bool AbstractionManager::update_state_abstraction(StateNode* s, bool gated) {
    if (s->state.terminal)
        return false;
    if (gated) {
        if (++s->recency < recency_k_)
            return false;
        s->recency = 0;
    }
    s->abs_updated = true;

    if (policy_.variant == AbstractionVariant::rstate) {
        rstate_update(s);
        return false;
    }
    if (policy_.variant == AbstractionVariant::none)
        return false;

    if (!s->fully_expanded())
        return false;

    JSet fresh = state_jset(*s);
    AbstractStateNode* old = s->group;
    StateNode* old_rep = old->representative;
    if (s != old_rep && old_rep->fully_expanded() && old_rep->jset.valid &&
        states_similar(*s, *old_rep, fresh, old_rep->jset)) {
        s->jset = std::move(fresh);
        return false;
    }

    AbstractStateNode* target = nullptr;
    for (auto* g : state_groups_[static_cast<std::size_t>(s->depth)]) {
        if (g->terminal_group)
            continue;
        const StateNode* rep = g->representative;
        if (rep != s) {
            // the stored JSet of the representative is consulted; for the
            // node itself the old stored value applies, which matches
            // reflexively
            if (!rep->fully_expanded() || !rep->jset.valid ||
                !states_similar(*s, *rep, fresh, rep->jset))
                continue;
        }
        if (!target || g->size() > target->size() ||
            (g->size() == target->size() && g->creation_id < target->creation_id))
            target = g;
    }
    s->jset = std::move(fresh);
    if (!target) {
        target = new_state_group(s);
        target->members.clear();
        target->visits = 0;
        target->total_return = 0.0;
        target->representative = s;
    }
    if (target == old)
        return false;
    if (target->members.empty())
        target->representative = s;
    move_state(s, target);
    for (QNode* parent : s->parents)
        update_q_abstraction(parent, !policy_.propagate_bypasses_recency);
    return true;
}

void AbstractionManager::rstate_update(StateNode* s) {
    if (s->group->size() != 1)
        return;
    if (policy_.p_move <= 0.0)
        return;
    if (policy_.p_move < 1.0 && uniform_real(*rng_) >= policy_.p_move)
        return;
    auto& pool = state_groups_[static_cast<std::size_t>(s->depth)];
    auto* target = pool[static_cast<std::size_t>(uniform_int(*rng_, static_cast<int>(pool.size())))];
    if (target == s->group)
        return;
    move_state(s, target);
    for (QNode* parent : s->parents)
        update_q_abstraction(parent, !policy_.propagate_bypasses_recency);
}

// --------------------------------------------------------- introspection

const std::vector<AbstractStateNode*>& AbstractionManager::state_groups_at(int depth) const {
    static const std::vector<AbstractStateNode*> empty;
    if (depth < 0 || depth >= static_cast<int>(state_groups_.size()))
        return empty;
    return state_groups_[static_cast<std::size_t>(depth)];
}

const std::vector<AbstractQNode*>& AbstractionManager::q_groups_at(int depth) const {
    static const std::vector<AbstractQNode*> empty;
    if (depth < 0 || depth >= static_cast<int>(q_groups_.size()))
        return empty;
    return q_groups_[static_cast<std::size_t>(depth)];
}

std::string AbstractionManager::signature() const {
    std::ostringstream out;
    auto dump = [&out](const auto& by_depth, const char* tag) {
        for (std::size_t d = 0; d < by_depth.size(); ++d) {
            // (creation id -> sorted member ids), ordered by creation id
            std::map<std::uint64_t, std::vector<std::uint32_t>> groups;
            for (const auto* g : by_depth[d]) {
                auto& ids = groups[g->creation_id];
                for (const auto* m : g->members)
                    ids.push_back(m->node_id);
                std::sort(ids.begin(), ids.end());
            }
            for (const auto& [gid, ids] : groups) {
                out << tag << d << ":" << gid << "=";
                for (auto id : ids)
                    out << id << ",";
                out << ";";
            }
        }
    };
    dump(state_groups_, "s");
    dump(q_groups_, "q");
    return out.str();
}

void AbstractionManager::check_consistency() const {
    auto check = [](const auto& by_depth, const char* what) {
        for (const auto& depth_list : by_depth) {
            for (const auto* g : depth_list) {
                if (!g->alive || g->members.empty())
                    throw std::logic_error(std::string(what) + ": dead or empty group listed");
                std::uint64_t visits = 0;
                double total = 0.0;
                bool rep_found = false;
                for (const auto* m : g->members) {
                    visits += m->visits;
                    total += m->total_return;
                    rep_found |= m == g->representative;
                    if (m->group != g)
                        throw std::logic_error(std::string(what) + ": member group mismatch");
                }
                if (!rep_found)
                    throw std::logic_error(std::string(what) + ": representative not a member");
                if (visits != g->visits || std::fabs(total - g->total_return) > 1e-6)
                    throw std::logic_error(std::string(what) + ": aggregate drift");
            }
        }
    };
    check(state_groups_, "state groups");
    check(q_groups_, "q groups");
}

double AbstractionManager::abstraction_rate() const {
    std::uint64_t eligible = 0, singleton = 0;
    for (const auto& depth_list : state_groups_) {
        for (const auto* g : depth_list) {
            if (g->terminal_group)
                continue;
            if (g->size() == 1 && !g->members[0]->abs_updated)
                continue;
            ++eligible;
            singleton += g->size() == 1;
        }
    }
    if (eligible == 0)
        throw NoEligibleGroups("abstraction_rate: no eligible state groups");
    return static_cast<double>(singleton) / static_cast<double>(eligible);
}

}  // namespace mctslab::search
