#pragma once

#include <string>

#include "divlab/reward/reward.hpp"

namespace divlab::reward {

// Same one-value-per-line format as the flow parameters, kind=reward. The
// payload is every number needed to rebuild the spec: encoder weights, the
// planted bias direction and the frozen text table.
std::string serialize_reward_spec(const RewardSpec& spec);
RewardSpec parse_reward_spec(const std::string& text, const std::string& origin);

void save_reward_spec(const std::string& path, const RewardSpec& spec);
RewardSpec load_reward_spec(const std::string& path);

} // namespace divlab::reward
