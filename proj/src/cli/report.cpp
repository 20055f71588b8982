#include <charconv>
#include <sstream>

#include "latglob/cli.hpp"

namespace latglob::cli {

std::optional<Command> parse_command(std::string_view name) {
  if (name == "predict") return Command::kPredict;
  if (name == "estimate") return Command::kEstimate;
  if (name == "compare") return Command::kCompare;
  if (name == "diagnose") return Command::kDiagnose;
  if (name == "counterexample") return Command::kCounterexample;
  if (name == "sweep") return Command::kSweep;
  return std::nullopt;
}

std::string command_name(Command c) {
  switch (c) {
    case Command::kPredict: return "predict";
    case Command::kEstimate: return "estimate";
    case Command::kCompare: return "compare";
    case Command::kDiagnose: return "diagnose";
    case Command::kCounterexample: return "counterexample";
    case Command::kSweep: return "sweep";
  }
  return "?";
}

std::optional<Format> parse_format(std::string_view name) {
  if (name == "json") return Format::kJson;
  if (name == "csv") return Format::kCsv;
  return std::nullopt;
}

const std::vector<std::string>& csv_header() {
  static const std::vector<std::string> header = {"command", "system", "quantity", "H",     "num",
                                                  "den",     "decimal", "lower",   "upper", "status"};
  return header;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json rational_json(const Rational& q) {
  Json j;
  j["num"] = q.get_num().get_str();
  j["den"] = q.get_den().get_str();
  j["decimal"] = to_decimal(q);
  return j;
}

Json estimate_json(const ExactEstimate& e) {
  Json j;
  j["H"] = e.H;
  j["num"] = e.numerator.get_str();
  j["den"] = e.denominator.get_str();
  j["decimal"] = to_decimal(e.value);
  j["value"] = rational_json(e.value);
  j["metadata"] = e.metadata;
  return j;
}

Json bounded_json(const TailBoundedValue& v) {
  Json j;
  j["partial"] = v.partial;
  j["tail_bound"] = v.tail_bound;
  j["lower"] = v.lower();
  j["upper"] = v.upper();
  j["terms_used"] = v.terms_used;
  j["cutoff_prime"] = v.cutoff_prime;
  switch (v.bracket) {
    case Bracket::kAbove: j["bracket"] = "above"; break;
    case Bracket::kBelow: j["bracket"] = "below"; break;
    case Bracket::kTwoSided: j["bracket"] = "two-sided"; break;
  }
  return j;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string render(const CommandOutput& output, Format format) {
  if (format == Format::kJson) return output.report.dump(2) + "\n";
  std::ostringstream os;
  const auto& header = csv_header();
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : output.rows) {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << (i < row.size() ? csv_field(row[i]) : "");
    os << '\n';
  }
  return os.str();
}

}  // namespace latglob::cli
