#pragma once

#include <memory>
#include <vector>

#include "mctslab/mdp.hpp"

namespace mctslab::domains {

/// Network of machines that fail depending on their neighbors.
/// Actions 0..n-1 reboot the corresponding machine, action n does nothing.
/// A rebooted machine runs next step with probability 1; a running machine
/// stays up with probability 0.45 + 0.5 * (fraction of running neighbors);
/// a crashed machine stays down. Reward per step is the number of running
/// machines minus 0.75 if a reboot was issued. No terminal states.
struct SysAdminSpec {
    enum class Topology { ring, grid };

    Topology topology = Topology::ring;
    int machines = 8;  // ring size; ignored for grid
    int grid_width = 3;
    int grid_height = 3;

    int machine_count() const {
        return topology == Topology::ring ? machines : grid_width * grid_height;
    }
    void validate() const;
};

class SysAdmin : public Mdp {
public:
    explicit SysAdmin(SysAdminSpec spec);

    EnvState initial_state() const override;
    int num_actions(const EnvState& state) const override;
    double reward(const EnvState& state, ActionIndex action) const override;
    std::vector<TransitionEntry> transitions(const EnvState& state,
                                             ActionIndex action) const override;
    std::size_t support_size(const EnvState& state, ActionIndex action) const override;
    SampleResult sample(const EnvState& state, ActionIndex action, Rng& rng) const override;
    std::string action_name(const EnvState& state, ActionIndex action) const override;

private:
    // probability that machine i runs next step, given current mask
    double up_probability(std::uint32_t mask, int machine, ActionIndex action) const;
    std::uint32_t mask_of(const EnvState& state) const;
    EnvState make_state(std::uint32_t mask) const;

    SysAdminSpec spec_;
    int n_ = 0;
    std::vector<std::vector<int>> neighbors_;
};

std::unique_ptr<Mdp> build_sysadmin(const SysAdminSpec& spec);

}  // namespace mctslab::domains
