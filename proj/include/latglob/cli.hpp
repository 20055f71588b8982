#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "latglob/analytic.hpp"
#include "latglob/estimate.hpp"

namespace latglob::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitComparisonFailed = 3;
inline constexpr int kExitBudget = 4;

enum class Command { kPredict, kEstimate, kCompare, kDiagnose, kCounterexample, kSweep };
enum class Format { kJson, kCsv };

struct RunConfig {
  Command command = Command::kPredict;
  std::string system_key;
  std::optional<std::int64_t> H;
  std::vector<std::int64_t> h_list;
  double eps = kDefaultEps;
  double alpha = 1.0;
  std::uint64_t M = 2;
  double tol = 0.02;
  Format format = Format::kJson;
  std::string out_path;  ///< empty: stdout
  unsigned threads = 0;
  std::string which = "mean";  ///< sweep quantity: mean | density | restricted
  std::uint64_t max_points = EnumerationOptions{}.max_points;
};

std::optional<Command> parse_command(std::string_view name);
std::string command_name(Command c);
std::optional<Format> parse_format(std::string_view name);

/// Throws DomainError for inconsistent flags or an unknown system key.
void validate(const RunConfig& config);

/// CSV columns shared by every command, in order.
const std::vector<std::string>& csv_header();

struct CommandOutput {
  int exit_code = kExitOk;
  Json report;
  std::vector<std::vector<std::string>> rows;  ///< matches csv_header()
};

/// Runs a validated config. Errors escape as exceptions; see exit_code_for.
CommandOutput run(const RunConfig& config);

/// Maps an exception from validate/run onto the documented exit codes.
int exit_code_for(const std::exception& e);

std::string render(const CommandOutput& output, Format format);

// Serialization helpers, shared with the bindings and tests.
Json rational_json(const Rational& q);
Json estimate_json(const ExactEstimate& e);
Json bounded_json(const TailBoundedValue& v);
std::string format_double(double x);

}  // namespace latglob::cli
