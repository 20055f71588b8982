#include <bit>
#include <cmath>
#include <cstdlib>

#include "latglob/cli.hpp"
#include "latglob/errors.hpp"
#include "latglob/primes.hpp"
#include "latglob/systems.hpp"

namespace latglob::cli {
namespace {

using Row = std::vector<std::string>;

Row row(const RunConfig& c, const std::string& quantity, std::optional<std::int64_t> H = std::nullopt) {
  Row r(csv_header().size());
  r[0] = command_name(c.command);
  r[1] = c.system_key;
  r[2] = quantity;
  if (H) r[3] = std::to_string(*H);
  return r;
}

Row estimate_row(const RunConfig& c, const std::string& quantity, const ExactEstimate& e,
                 const std::string& status = "ok") {
  Row r = row(c, quantity, e.H);
  r[4] = e.numerator.get_str();
  r[5] = e.denominator.get_str();
  r[6] = to_decimal(e.value);
  r[9] = status;
  return r;
}

Row bounded_row(const RunConfig& c, const std::string& quantity, const TailBoundedValue& v,
                const std::string& status = "ok") {
  Row r = row(c, quantity);
  r[6] = format_double(v.partial);
  r[7] = format_double(v.lower());
  r[8] = format_double(v.upper());
  r[9] = status;
  return r;
}

EnumerationOptions options_of(const RunConfig& c) { return EnumerationOptions{c.threads, c.max_points}; }

std::vector<std::int64_t> schedule_of(const RunConfig& c) {
  if (!c.h_list.empty()) return c.h_list;
  if (c.H) return {*c.H};
  return {};
}

bool is_counterexample(const std::string& key) { return key.rfind("cex:", 0) == 0; }

// Decimal value of an exact rational as rendered in reports.
double rendered(const Rational& q) { return std::strtod(to_decimal(q).c_str(), nullptr); }

CommandOutput predict(const RunConfig& c) {
  const SystemPtr sys = make_system(c.system_key);
  CommandOutput out;
  const TailBoundedValue mu = prime_series(*sys, c.eps);
  const TailBoundedValue prod = euler_product(*sys, c.eps);
  const TailBoundedValue rho = predicted_density_T(*sys, c.eps);
  Json& j = out.report;
  j["command"] = "predict";
  j["system"] = sys->key();
  j["eps"] = c.eps;
  j["mean"] = bounded_json(mu);
  j["euler_product"] = bounded_json(prod);
  j["density_T"] = bounded_json(rho);
  out.rows.push_back(bounded_row(c, "mean", mu));
  out.rows.push_back(bounded_row(c, "euler_product", prod));
  out.rows.push_back(bounded_row(c, "density_T", rho));
  try {
    const TailBoundedValue mt = predicted_restricted_mean(*sys, c.eps);
    j["restricted_mean"] = bounded_json(mt);
    out.rows.push_back(bounded_row(c, "restricted_mean", mt));
  } catch (const DegenerateDenominator& e) {
    j["restricted_mean"] = Json{{"undefined", true}, {"reason", "restricted mean undefined: predicted density of T is 0"}};
    out.rows.push_back(bounded_row(c, "restricted_mean", TailBoundedValue{}, "undefined"));
  }
  const TailMajorant tm = sys->tail_majorant();
  const VpMajorantInfo vp = sys->vp_majorant_info();
  j["tail_majorant"] = tm.description;
  j["vp_majorant"] = Json{{"name", vp.name}, {"available", vp.available}, {"summable", vp.summable}};
  if (is_counterexample(sys->key())) {
    j["hypotheses_hold"] = false;
    j["note"] = "hypotheses of the mean formula fail; the predicted value 0 is not the mean. " + sys->note();
  } else {
    j["hypotheses_hold"] = true;
    j["note"] = sys->note();
  }
  return out;
}

CommandOutput estimate(const RunConfig& c) {
  const SystemPtr sys = make_system(c.system_key);
  const BoxSpec box{*c.H, sys->dimension()};
  const BoxTally t = box_tally(*sys, box, options_of(c));
  auto make = [&](const BigInt& num, const BigInt& den, const std::string& what) {
    ExactEstimate e;
    e.numerator = num;
    e.denominator = den;
    e.value = make_rational(num, den);
    e.H = box.H;
    e.metadata = what + " system=" + sys->key() + " H=" + std::to_string(box.H) + " d=" + std::to_string(box.d);
    return e;
  };
  CommandOutput out;
  Json& j = out.report;
  j["command"] = "estimate";
  j["system"] = sys->key();
  j["H"] = box.H;
  j["d"] = box.d;
  j["points"] = t.points.get_str();
  j["exceptional"] = t.exceptional.get_str();
  const ExactEstimate mean = make(t.place_sum, t.points, "mean");
  const ExactEstimate dens = make(t.in_T, t.points, "density-T");
  j["mean"] = estimate_json(mean);
  j["density_T"] = estimate_json(dens);
  out.rows.push_back(estimate_row(c, "mean", mean));
  out.rows.push_back(estimate_row(c, "density_T", dens));
  if (t.in_T == 0) {
    j["restricted_mean"] = Json{{"undefined", true}, {"reason", "no point of the box lies in any U_p"}};
    Row r = row(c, "restricted_mean", box.H);
    r[9] = "undefined";
    out.rows.push_back(r);
  } else {
    const ExactEstimate rm = make(t.place_sum, t.in_T, "restricted-mean");
    j["restricted_mean"] = estimate_json(rm);
    out.rows.push_back(estimate_row(c, "restricted_mean", rm));
  }
  return out;
}

CommandOutput compare(const RunConfig& c) {
  const SystemPtr sys = make_system(c.system_key);
  const TailBoundedValue mu = prime_series(*sys, c.eps);
  CommandOutput out;
  Json& j = out.report;
  j["command"] = "compare";
  j["system"] = sys->key();
  j["tolerance"] = c.tol;
  j["predicted"] = bounded_json(mu);
  out.rows.push_back(bounded_row(c, "predicted_mean", mu));
  Json rows = Json::array();
  bool all_within = true;
  bool increasing = true;
  std::optional<Rational> prev;
  for (std::int64_t H : schedule_of(c)) {
    const ExactEstimate e = empirical_mean(*sys, BoxSpec{H, sys->dimension()}, options_of(c));
    const double gap = std::fabs(rendered(e.value) - mu.partial);
    const bool within = gap <= c.tol;
    all_within = all_within && within;
    if (prev && !(e.value > *prev)) increasing = false;
    prev = e.value;
    Json r;
    r["empirical"] = estimate_json(e);
    r["abs_gap"] = gap;
    r["within_tolerance"] = within;
    rows.push_back(std::move(r));
    Row csv = estimate_row(c, "empirical_mean", e, within ? "pass" : "fail");
    csv[7] = format_double(gap);
    out.rows.push_back(csv);
  }
  j["comparisons"] = std::move(rows);
  j["strictly_increasing"] = increasing;
  j["within_tolerance"] = all_within;
  j["note"] = sys->note();
  out.exit_code = all_within ? kExitOk : kExitComparisonFailed;
  return out;
}

CommandOutput diagnose(const RunConfig& c) {
  const SystemPtr sys = make_system(c.system_key);
  const BoxSpec box{*c.H, sys->dimension()};
  const ConditionProfile prof = newcond_profile(*sys, box, c.alpha, options_of(c));
  const ExactEstimate tail = tail_union_density(*sys, c.M, box, options_of(c));
  CommandOutput out;
  Json& j = out.report;
  j["command"] = "diagnose";
  j["system"] = sys->key();
  j["H"] = box.H;
  j["alpha"] = prof.alpha;
  j["threshold"] = prof.threshold;
  j["max_ell"] = prof.max_ell;
  j["max_ell_witness"] = prof.max_ell_witness;
  j["vp_majorant"] = Json{{"name", prof.vp_majorant_name}, {"summable", prof.vp_majorant_summable}};
  j["vp_violations"] = prof.vp_violations;
  j["occupancy_sum"] = rational_json(prof.occupancy_sum);
  Json occ = Json::array();
  for (const auto& o : prof.per_prime_occupancy) {
    Json r;
    r["p"] = o.p;
    r["occupancy"] = rational_json(o.occupancy);
    if (o.vp) {
      r["vp"] = *o.vp;
    } else {
      r["vp"] = nullptr;
    }
    r["within_majorant"] = o.within_majorant;
    occ.push_back(std::move(r));
  }
  j["per_prime_occupancy"] = std::move(occ);
  j["M"] = c.M;
  j["tail_union"] = estimate_json(tail);

  Row ell = row(c, "max_ell", box.H);
  ell[6] = std::to_string(prof.max_ell);
  out.rows.push_back(ell);
  Row sum = row(c, "occupancy_sum", box.H);
  sum[4] = prof.occupancy_sum.get_num().get_str();
  sum[5] = prof.occupancy_sum.get_den().get_str();
  sum[6] = to_decimal(prof.occupancy_sum);
  sum[9] = prof.vp_violations == 0 ? "ok" : "violations=" + std::to_string(prof.vp_violations);
  out.rows.push_back(sum);
  out.rows.push_back(estimate_row(c, "tail_union M=" + std::to_string(c.M), tail));
  for (const auto& o : prof.per_prime_occupancy) {
    Row r = row(c, "occupancy p=" + std::to_string(o.p), box.H);
    r[4] = o.occupancy.get_num().get_str();
    r[5] = o.occupancy.get_den().get_str();
    r[6] = to_decimal(o.occupancy);
    if (o.vp) r[8] = format_double(*o.vp);
    r[9] = o.within_majorant ? "ok" : "exceeds";
    out.rows.push_back(r);
  }
  return out;
}

std::vector<std::int64_t> default_schedule(char which) {
  std::vector<std::int64_t> hs;
  if (which == 'A') {
    for (int n = 8; n <= 14; ++n) {
      hs.push_back(std::int64_t{1} << (n + 1));
      hs.push_back((std::int64_t{1} << (n + 1)) + 1);
    }
  } else if (which == 'B') {
    for (int L = 3; L <= 10; ++L) hs.push_back(static_cast<std::int64_t>(nth_prime(std::uint64_t{1} << L)));
  } else {
    hs = {100, 1000, 10000};
  }
  return hs;
}

CommandOutput counterexample(const RunConfig& c) {
  const SystemPtr sys = make_system(c.system_key);
  const char which = c.system_key.back();
  const std::vector<std::int64_t> hs = c.h_list.empty() ? (c.H ? std::vector{*c.H} : default_schedule(which)) : c.h_list;
  const EnumerationOptions opts = options_of(c);
  for (std::int64_t H : hs) {
    if (BoxSpec{H, 1}.point_count() > big_from_u64(opts.max_points)) {
      const std::int64_t best = max_feasible_h(1, opts.max_points);
      throw BudgetError("H=" + std::to_string(H) + " is infeasible; max feasible H = " + std::to_string(best),
                        static_cast<std::uint64_t>(best));
    }
  }

  CommandOutput out;
  Json& j = out.report;
  j["command"] = "counterexample";
  j["system"] = sys->key();
  j["predicted_sum"] = 0;
  j["note"] = sys->note();
  Json rows = Json::array();
  std::optional<Rational> prev;
  bool increasing = true;
  bool all_bounds = true;
  // B's bound is asymptotic: track the final run of rows that meet it.
  std::optional<int> b_from;
  bool b_last = false;
  for (std::int64_t H : hs) {
    const ExactEstimate e = empirical_mean(*sys, BoxSpec{H, 1}, opts);
    Json r;
    r["H"] = H;
    r["mean"] = estimate_json(e);
    Row csv = estimate_row(c, "mean", e);
    if (prev && !(e.value > *prev)) increasing = false;
    prev = e.value;
    if (which == 'A') {
      // H = 2^(n+1) and 2^(n+1) + 1 carry closed forms.
      const auto h = static_cast<std::uint64_t>(H);
      std::optional<Rational> expected;
      if (std::has_single_bit(h) && h >= 2) {
        expected = make_rational(big_from_u64(h - 1), big_from_u64(2 * h));
        r["subsequence"] = "2^(n+1)";
      } else if (h >= 3 && std::has_single_bit(h - 1)) {
        expected = make_rational(big_from_u64(2 * (h - 1) - 1), big_from_u64(2 * h));
        r["subsequence"] = "2^(n+1)+1";
      }
      if (expected) {
        r["expected"] = rational_json(*expected);
        r["exact_match"] = *expected == e.value;
        csv[9] = *expected == e.value ? "exact" : "mismatch";
        all_bounds = all_bounds && *expected == e.value;
      }
    } else if (which == 'B') {
      const std::uint64_t j_index = PrimeCache::instance().index_of(static_cast<std::uint64_t>(H));
      if (std::has_single_bit(j_index)) {
        const int L = std::countr_zero(j_index);
        BigInt num = 1;
        num <<= 2 * L;
        const Rational bound = make_rational(num, 5 * big_from_i64(H));
        r["L"] = L;
        r["lower_bound"] = rational_json(bound);
        const bool meets = e.value >= bound;
        r["meets_bound"] = meets;
        if (!meets) {
          b_from.reset();
        } else if (!b_from) {
          b_from = L;
        }
        b_last = meets;
        csv[7] = to_decimal(bound);
      }
    } else {
      const auto root = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(H)));
      std::int64_t s = root;
      while (s * s > H) --s;
      while ((s + 1) * (s + 1) <= H) ++s;
      const Rational bound = make_rational(big_from_i64((s - 1) * (s - 1)), BigInt(32));
      r["lower_bound"] = rational_json(bound);
      r["meets_bound"] = e.value >= bound;
      all_bounds = all_bounds && e.value >= bound;
      csv[7] = to_decimal(bound);
    }
    rows.push_back(std::move(r));
    out.rows.push_back(csv);
  }
  j["rows"] = std::move(rows);
  j["strictly_increasing"] = increasing;
  if (which == 'B') {
    j["bound_holds_from_L"] = b_from ? Json(*b_from) : Json(nullptr);
    all_bounds = b_last;
  }
  j["reference_values_hold"] = all_bounds;
  return out;
}

CommandOutput sweep_cmd(const RunConfig& c) {
  const SystemPtr sys = make_system(c.system_key);
  SweepKind kind = SweepKind::kMean;
  if (c.which == "density") kind = SweepKind::kDensityT;
  if (c.which == "restricted") kind = SweepKind::kRestricted;
  const std::vector<ExactEstimate> results = sweep(*sys, schedule_of(c), kind, options_of(c));
  CommandOutput out;
  Json& j = out.report;
  j["command"] = "sweep";
  j["system"] = sys->key();
  j["which"] = c.which;
  Json rows = Json::array();
  for (const auto& e : results) {
    rows.push_back(estimate_json(e));
    out.rows.push_back(estimate_row(c, c.which, e));
  }
  j["rows"] = std::move(rows);
  return out;
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.system_key.empty()) throw DomainError("--system is required");
  (void)make_system(c.system_key);
  if (!(c.eps > 0.0) || !std::isfinite(c.eps)) throw DomainError("--eps must be > 0");
  if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) throw DomainError("--alpha must be > 0");
  if (!(c.tol >= 0.0) || !std::isfinite(c.tol)) throw DomainError("--tol must be >= 0");
  if (c.H && *c.H < 1) throw DomainError("--H must be >= 1");
  for (std::size_t i = 0; i < c.h_list.size(); ++i) {
    if (c.h_list[i] < 1) throw DomainError("--H-list entries must be >= 1");
    if (i > 0 && c.h_list[i] <= c.h_list[i - 1]) throw DomainError("--H-list must be strictly increasing");
  }
  if (c.H && !c.h_list.empty()) throw DomainError("give either --H or --H-list, not both");
  if (c.which != "mean" && c.which != "density" && c.which != "restricted") {
    throw DomainError("--which must be mean, density or restricted");
  }
  if (c.threads > 1024) throw DomainError("--threads must be <= 1024");
  switch (c.command) {
    case Command::kEstimate:
    case Command::kDiagnose:
      if (!c.H) throw DomainError("--H is required for " + command_name(c.command));
      break;
    case Command::kCompare:
    case Command::kSweep:
      if (!c.H && c.h_list.empty()) throw DomainError("--H or --H-list is required for " + command_name(c.command));
      break;
    case Command::kCounterexample:
      if (!is_counterexample(c.system_key)) throw DomainError("counterexample requires --system cex:A, cex:B or cex:C");
      break;
    case Command::kPredict:
      break;
  }
}

CommandOutput run(const RunConfig& c) {
  validate(c);
  switch (c.command) {
    case Command::kPredict: return predict(c);
    case Command::kEstimate: return estimate(c);
    case Command::kCompare: return compare(c);
    case Command::kDiagnose: return diagnose(c);
    case Command::kCounterexample: return counterexample(c);
    case Command::kSweep: return sweep_cmd(c);
  }
  throw DomainError("unknown command");
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const BudgetError*>(&e)) return kExitBudget;
  if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const EmptyRestriction*>(&e) ||
      dynamic_cast<const DegenerateDenominator*>(&e)) {
    return kExitValidation;
  }
  return kExitInternal;
}

}  // namespace latglob::cli
