#include <charconv>
#include <map>
#include <sstream>

#include "latglob/errors.hpp"
#include "latglob/systems.hpp"

namespace latglob {
namespace {

[[noreturn]] void reject(std::string_view key, std::string_view why) {
  std::ostringstream os;
  os << "invalid system key '" << key << "': " << why << "; valid keys:";
  for (const auto& form : system_key_forms()) os << ' ' << form;
  throw DomainError(os.str());
}

// "n=2,m=3" -> {n: 2, m: 3}
std::map<std::string, int, std::less<>> parse_params(std::string_view key, std::string_view text) {
  std::map<std::string, int, std::less<>> out;
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) reject(key, "parameters must look like name=value");
    int value = 0;
    const std::string_view digits = item.substr(eq + 1);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) reject(key, "parameter values must be integers");
    if (!out.emplace(std::string(item.substr(0, eq)), value).second) reject(key, "duplicate parameter");
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

int require(std::string_view key, const std::map<std::string, int, std::less<>>& params, std::string_view name,
            std::size_t expected_count) {
  if (params.size() != expected_count) reject(key, "unexpected parameter set");
  auto it = params.find(name);
  if (it == params.end()) reject(key, "missing parameter " + std::string(name));
  return it->second;
}

}  // namespace

std::vector<std::string> system_key_forms() {
  return {"minors:n=<n>,m=<m>", "eisenstein:d=<d>", "shifted-eisenstein:d=<d>", "cex:A", "cex:B", "cex:C"};
}

SystemPtr make_system(std::string_view key) {
  const std::size_t colon = key.find(':');
  if (colon == std::string_view::npos) reject(key, "missing ':'");
  const std::string_view family = key.substr(0, colon);
  const std::string_view rest = key.substr(colon + 1);

  try {
    if (family == "cex") {
      if (rest == "A") return counterexample_a();
      if (rest == "B") return counterexample_b();
      if (rest == "C") return counterexample_c();
      reject(key, "counterexample must be A, B or C");
    }
    const auto params = parse_params(key, rest);
    if (family == "minors") {
      require(key, params, "m", 2);
      return minors_system(require(key, params, "n", 2), params.find("m")->second);
    }
    if (family == "eisenstein") return eisenstein_system(require(key, params, "d", 1));
    if (family == "shifted-eisenstein") return shifted_eisenstein_system(require(key, params, "d", 1));
  } catch (const DomainError& e) {
    if (std::string_view(e.what()).starts_with("invalid system key")) throw;
    reject(key, e.what());
  }
  reject(key, "unknown family");
}

}  // namespace latglob
