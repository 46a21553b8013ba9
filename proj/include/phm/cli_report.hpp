#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace phm {

inline constexpr const char* kToolVersion = "1.0.0";

enum class CheckStatus { Pass, Fail, Assumed };
std::string status_name(CheckStatus s);

struct CheckRecord {
  std::string id;
  std::string anchor;
  CheckStatus status = CheckStatus::Fail;
  nlohmann::json payload;
  std::string failure;  // empty unless status == Fail
  double seconds = 0;
};

struct Certificate {
  std::string version = kToolVersion;
  std::vector<CheckRecord> checks;
  std::vector<std::string> assumptions;
  std::map<std::string, std::uint64_t> seeds;
  bool pass = false;
  std::optional<std::string> failed_check;
  std::optional<long> lambda1;
  std::optional<long> lambda2;
  bool lambda2_assumed = false;
  double total_seconds = 0;

  const CheckRecord* find(const std::string& id) const;
  /// Keys in lexicographic order. Timing lives under a separate top-level key.
  nlohmann::json to_json(bool include_timing = true) const;
  std::string dump(bool include_timing = true) const;
};

struct MatrixPerturbation {
  std::size_t row = 0;
  std::size_t col = 0;
  long delta = 1;
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  unsigned samples = 5;
  std::set<std::string> skip;
  unsigned growth_n = 3;
  std::optional<MatrixPerturbation> perturb_matrix;  // fault injection
  std::ostream* progress = nullptr;
};

/// Check ids in pipeline order.
const std::vector<std::string>& check_ids();

/// Runs every check in order and stops at the first failure. Skipped
/// checks are recorded as assumed. Throws std::invalid_argument for an
/// unknown skip id.
Certificate verify(const VerifyOptions& opts = {});

/// Entry point of the `phm` tool. Exit status 0 on success, 1 when a check
/// fails, 2 on usage errors.
int run_cli(int argc, char** argv);

}  // namespace phm
