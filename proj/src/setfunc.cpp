#include "capax/setfunc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace capax {

std::string role_name(Role r) {
  switch (r) {
    case Role::lower: return "lower";
    case Role::upper: return "upper";
    case Role::mobius: return "mobius";
    case Role::commonality: return "commonality";
    case Role::potential: return "potential";
  }
  return "?";
}

std::string status_name(IntervalStatus s) {
  switch (s) {
    case IntervalStatus::normal: return "normal";
    case IntervalStatus::vacuous: return "vacuous";
    case IntervalStatus::contradiction: return "contradiction";
  }
  return "?";
}

namespace {

void require_role(const SetFunction& f, std::initializer_list<Role> allowed,
                  const char* op) {
  for (Role r : allowed)
    if (f.role() == r) return;
  throw NumericDomainError(std::string(op) + ": unsupported role '" + role_name(f.role()) + "'");
}

int sign_of(std::uint64_t popcnt) { return (popcnt & 1) ? -1 : 1; }

/// Dense event-lattice vector indexed by event mask; n is the configuration
/// count of the scope, so the lattice has 2^n entries.
struct Dense {
  std::uint64_t n;
  std::vector<double> v;
};

Dense to_dense(const SetFunction& f, const char* op) {
  const std::uint64_t n = f.configs();
  if (n > kDenseConfigLimit)
    throw SizeGuardError(std::string(op) + ": scope has " + std::to_string(n) +
                         " configurations, dense transform limit is " +
                         std::to_string(kDenseConfigLimit));
  Dense d{n, std::vector<double>(std::uint64_t(1) << n, 0.0)};
  for (const auto& [ev, val] : f.entries()) d.v[ev.mask()] = val;
  if (f.role() == Role::commonality && !f.entries().count(ConfigSet::none(n)))
    d.v[0] = 1.0;
  return d;
}

/// In-place subset-sum (zeta) transform: v[S] = Σ_{B ⊆ S} v[B].
void subset_zeta(Dense& d) {
  for (std::uint64_t bit = 0; bit < d.n; ++bit) {
    const std::uint64_t b = std::uint64_t(1) << bit;
    for (std::uint64_t s = 0; s < d.v.size(); ++s)
      if (s & b) d.v[s] += d.v[s ^ b];
  }
}

/// In-place inverse of subset_zeta.
void subset_mobius(Dense& d) {
  for (std::uint64_t bit = 0; bit < d.n; ++bit) {
    const std::uint64_t b = std::uint64_t(1) << bit;
    for (std::uint64_t s = 0; s < d.v.size(); ++s)
      if (s & b) d.v[s] -= d.v[s ^ b];
  }
}

ConfigSet set_from_mask(std::uint64_t n, std::uint64_t mask) {
  ConfigSet out = ConfigSet::none(n);
  while (mask != 0) {
    out.insert(static_cast<std::uint64_t>(__builtin_ctzll(mask)));
    mask &= mask - 1;
  }
  return out;
}

SetFunction sparsify(const Dense& d, const Scope& scope, Role role) {
  SetFunction out(scope, role, d.n);
  for (std::uint64_t m = 0; m < d.v.size(); ++m) {
    const double val = d.v[m];
    if (std::abs(val) > kZeroTol || (role == Role::commonality && m == 0))
      out.set(set_from_mask(d.n, m), val);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// SetFunction

SetFunction::SetFunction(Scope scope, Role role, std::uint64_t configs)
    : scope_(std::move(scope)), role_(role), n_(configs) {}

SetFunction SetFunction::constant_one(Scope scope, Role role, std::uint64_t configs) {
  if (configs > 16)
    throw SizeGuardError("constant_one: scope has " + std::to_string(configs) +
                         " configurations; dense potentials are limited to 16");
  SetFunction f(std::move(scope), role, configs);
  for (std::uint64_t m = 1; m < (std::uint64_t(1) << configs); ++m)
    f.set(set_from_mask(configs, m), 1.0);
  return f;
}

double SetFunction::value_at(const ConfigSet& event) const {
  if (event.universe() != n_) throw ScopeError("event universe does not match set function");
  auto it = entries_.find(event);
  if (it != entries_.end()) return it->second;
  if (role_ == Role::commonality && event.empty()) return 1.0;
  return 0.0;
}

void SetFunction::set(const ConfigSet& event, double value) {
  if (event.universe() != n_) throw ScopeError("event universe does not match set function");
  const bool keep_zero = role_ == Role::commonality && event.empty();
  if (std::abs(value) <= kZeroTol && !keep_zero) {
    entries_.erase(event);
  } else {
    entries_[event] = value;
  }
}

double SetFunction::total() const {
  double s = 0.0;
  for (const auto& [ev, val] : entries_) s += val;
  return s;
}

SetFunction SetFunction::with_role(Role role) const {
  SetFunction out(scope_, role, n_);
  for (const auto& [ev, val] : entries_) out.set(ev, val);
  return out;
}

bool SetFunction::operator==(const SetFunction& other) const {
  return scope_ == other.scope_ && role_ == other.role_ && n_ == other.n_ &&
         entries_ == other.entries_;
}

// ---------------------------------------------------------------------------
// Dense transforms

SetFunction mobius_transform(const SetFunction& lower) {
  require_role(lower, {Role::lower}, "mobius_transform");
  Dense d = to_dense(lower, "mobius_transform");
  subset_mobius(d);
  return sparsify(d, lower.scope(), Role::mobius);
}

SetFunction inverse_mobius(const SetFunction& mass) {
  require_role(mass, {Role::mobius, Role::potential}, "inverse_mobius");
  Dense d = to_dense(mass, "inverse_mobius");
  subset_zeta(d);
  return sparsify(d, mass.scope(), Role::lower);
}

SetFunction dual_function(const SetFunction& p) {
  require_role(p, {Role::lower, Role::upper}, "dual_function");
  Dense d = to_dense(p, "dual_function");
  const std::uint64_t fullmask = d.v.size() - 1;
  Dense out{d.n, std::vector<double>(d.v.size())};
  for (std::uint64_t m = 0; m < d.v.size(); ++m)
    out.v[m] = 1.0 - d.v[fullmask & ~m];
  return sparsify(out, p.scope(), p.role() == Role::lower ? Role::upper : Role::lower);
}

SetFunction commonality_transform(const SetFunction& upper) {
  require_role(upper, {Role::upper}, "commonality_transform");
  Dense d = to_dense(upper, "commonality_transform");
  for (std::uint64_t m = 0; m < d.v.size(); ++m)
    d.v[m] *= sign_of(std::popcount(m));
  subset_zeta(d);
  for (double& x : d.v) x = -x;
  d.v[0] = 1.0;
  return sparsify(d, upper.scope(), Role::commonality);
}

SetFunction inverse_commonality(const SetFunction& commonality) {
  require_role(commonality, {Role::commonality}, "inverse_commonality");
  if (std::abs(commonality.value_at(ConfigSet::none(commonality.configs())) - 1.0) > kCompareTol)
    throw NumericDomainError("inverse_commonality: Q(empty) must be 1");
  Dense d = to_dense(commonality, "inverse_commonality");
  for (std::uint64_t m = 0; m < d.v.size(); ++m)
    d.v[m] *= sign_of(std::popcount(m));
  subset_zeta(d);
  for (double& x : d.v) x = 1.0 - x;
  return sparsify(d, commonality.scope(), Role::upper);
}

// ---------------------------------------------------------------------------
// Sparse point evaluation

double lower_value(const SetFunction& mass, const ConfigSet& a) {
  require_role(mass, {Role::mobius, Role::potential}, "lower_value");
  double s = 0.0;
  for (const auto& [ev, val] : mass.entries())
    if (ev.subset_of(a)) s += val;
  return s;
}

double upper_value(const SetFunction& commonality, const ConfigSet& a) {
  require_role(commonality, {Role::commonality, Role::potential}, "upper_value");
  double s = 0.0;
  bool saw_empty = false;
  for (const auto& [ev, val] : commonality.entries()) {
    if (!ev.subset_of(a)) continue;
    s += sign_of(ev.count()) * val;
    if (ev.empty()) saw_empty = true;
  }
  if (!saw_empty && commonality.role() == Role::commonality) s += 1.0;
  return 1.0 - s;
}

// ---------------------------------------------------------------------------
// Localization

SetFunction localize_mass(const Space& space, const SetFunction& mass, const Scope& sub) {
  require_role(mass, {Role::mobius, Role::potential}, "localize_mass");
  Projector proj(space, mass.scope(), sub);
  const std::uint64_t sub_n = config_count(space, sub);
  std::map<ConfigSet, double> acc;
  for (const auto& [ev, val] : mass.entries()) {
    ConfigSet p = ConfigSet::none(sub_n);
    ev.for_each([&](std::uint64_t i) { p.insert(proj(i)); });
    acc[p] += val;
  }
  SetFunction out(sub, mass.role(), sub_n);
  for (const auto& [ev, val] : acc) out.set(ev, val);
  return out;
}

SetFunction localize_commonality(const Space& space, const SetFunction& commonality,
                                 const Scope& sub) {
  require_role(commonality, {Role::commonality, Role::potential}, "localize_commonality");
  Projector proj(space, commonality.scope(), sub);
  const std::uint64_t sub_n = config_count(space, sub);
  std::map<ConfigSet, double> acc;  // sign-weighted preimage sums
  bool saw_empty = false;
  for (const auto& [ev, val] : commonality.entries()) {
    ConfigSet p = ConfigSet::none(sub_n);
    ev.for_each([&](std::uint64_t i) { p.insert(proj(i)); });
    acc[p] += sign_of(ev.count()) * val;
    if (ev.empty()) saw_empty = true;
  }
  if (!saw_empty && commonality.role() == Role::commonality)
    acc[ConfigSet::none(sub_n)] += 1.0;
  SetFunction out(sub, commonality.role(), sub_n);
  for (const auto& [ev, val] : acc) out.set(ev, sign_of(ev.count()) * val);
  return out;
}

SetFunction restrict_to_evidence(const Space& space, const SetFunction& f,
                                 const Event& evidence) {
  require_role(f, {Role::mobius, Role::commonality, Role::potential}, "restrict_to_evidence");
  if (!evidence.scope.subset_of(f.scope()))
    throw ScopeError("restrict_to_evidence: evidence scope is not contained in the function scope");
  const ConfigSet cyl = extend(space, evidence, f.scope()).configs;
  SetFunction out(f.scope(), f.role(), f.configs());
  for (const auto& [ev, val] : f.entries())
    if (ev.subset_of(cyl)) out.set(ev, val);
  return out;
}

// ---------------------------------------------------------------------------
// Conditioning

namespace {

double clamp01(double x, const char* name) {
  if (x < -kCompareTol || x > 1.0 + kCompareTol)
    throw NumericDomainError(std::string("conditional_interval: ") + name +
                             " = " + std::to_string(x) + " is outside [0,1]");
  return std::min(1.0, std::max(0.0, x));
}

}  // namespace

Interval conditional_interval(const ConditionalInputs& in) {
  const double low_ae = clamp01(in.lower_target_and_evidence, "P(A∩E)");
  const double up_ace = clamp01(in.upper_complement_and_evidence, "P̄(Ā∩E)");
  const double up_ae = clamp01(in.upper_target_and_evidence, "P̄(A∩E)");
  const double low_ace = clamp01(in.lower_complement_and_evidence, "P(Ā∩E)");
  const double low_e = clamp01(in.lower_evidence, "P(E)");
  const double up_e = clamp01(in.upper_evidence, "P̄(E)");
  if (low_e > up_e + kCompareTol)
    throw NumericDomainError("conditional_interval: P(E) exceeds P̄(E)");

  if (up_e <= kCompareTol)
    return Interval{0.0, 0.0, IntervalStatus::contradiction};

  if (low_e <= kCompareTol) {
    if (in.evidence_implies_target) return Interval{1.0, 1.0, IntervalStatus::vacuous};
    if (in.evidence_excludes_target) return Interval{0.0, 0.0, IntervalStatus::vacuous};
    return Interval{0.0, 1.0, IntervalStatus::vacuous};
  }

  const double den_lower = low_ae + up_ace;
  const double lower = den_lower <= kZeroTol ? 0.0 : low_ae / den_lower;
  const double den_upper = up_ae + low_ace;
  if (den_upper <= kZeroTol)
    throw NumericDomainError(
        "conditional_interval: P̄(A∩E) + P(Ā∩E) = 0 while P(E) > 0; "
        "inputs are not consistent with any 2-monotone model");
  const double upper = up_ae / den_upper;
  return Interval{std::min(1.0, std::max(0.0, lower)),
                  std::min(1.0, std::max(0.0, upper)), IntervalStatus::normal};
}

// ---------------------------------------------------------------------------
// 2-monotonicity

TwoMonotoneReport check_two_monotone(const SetFunction& lower, std::uint64_t max_configs) {
  require_role(lower, {Role::lower}, "check_two_monotone");
  const std::uint64_t n = lower.configs();
  if (n > max_configs)
    throw SizeGuardError("check_two_monotone: scope has " + std::to_string(n) +
                         " configurations, guard is " + std::to_string(max_configs));
  Dense d = to_dense(lower, "check_two_monotone");
  TwoMonotoneReport report;
  constexpr std::size_t kMaxViolations = 20;
  auto add = [&](std::string msg) {
    report.pass = false;
    if (report.violations.size() < kMaxViolations) report.violations.push_back(std::move(msg));
  };

  const std::uint64_t fullmask = d.v.size() - 1;
  if (std::abs(d.v[0]) > kCompareTol) add("P(empty) = " + std::to_string(d.v[0]) + " != 0");
  if (std::abs(d.v[fullmask] - 1.0) > kCompareTol)
    add("P(full) = " + std::to_string(d.v[fullmask]) + " != 1");
  for (std::uint64_t m = 0; m <= fullmask; ++m) {
    if (d.v[m] < -kCompareTol || d.v[m] > 1.0 + kCompareTol) {
      std::ostringstream os;
      os << "P(mask " << m << ") = " << d.v[m] << " outside [0,1]";
      add(os.str());
    }
  }
  for (std::uint64_t a = 0; a <= fullmask; ++a) {
    for (std::uint64_t b = a + 1; b <= fullmask; ++b) {
      const double lhs = d.v[a] + d.v[b];
      const double rhs = d.v[a | b] + d.v[a & b];
      if (lhs > rhs + kCompareTol) {
        std::ostringstream os;
        os << "P(mask " << a << ") + P(mask " << b << ") = " << lhs
           << " exceeds P(union) + P(intersection) = " << rhs;
        add(os.str());
      }
    }
  }
  return report;
}

}  // namespace capax
