#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace riskcontract {

enum class SweepKind { Coverage, Premium };

struct CommandOptions {
  std::optional<std::string> out_dir;  // overrides the config's output.dir
  std::uint64_t seed = 1729;
  bool verbose = false;
};

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNoContract = 2;
inline constexpr int kExitDiagnostic = 3;

int cmd_solve(const std::filesystem::path& config, const CommandOptions& opts);
int cmd_sweep(const std::filesystem::path& config, SweepKind kind,
              const CommandOptions& opts);
int cmd_check(const std::filesystem::path& config, const CommandOptions& opts);

}  // namespace riskcontract
