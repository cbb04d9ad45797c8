#include "capax/event.hpp"

#include <algorithm>
#include <bit>

namespace capax {

// ---------------------------------------------------------------------------
// Space

Space::Space(std::vector<Variable> vars) : vars_(std::move(vars)) {
  for (VarId id = 0; id < vars_.size(); ++id) {
    const Variable& v = vars_[id];
    if (v.name.empty()) throw SchemaError("variable #" + std::to_string(id) + " has an empty name");
    if (v.domain.empty()) throw SchemaError("variable '" + v.name + "' has an empty domain");
    std::vector<std::string> labels = v.domain;
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
      throw SchemaError("variable '" + v.name + "' has duplicate domain labels");
    if (!index_.emplace(v.name, id).second)
      throw SchemaError("duplicate variable name '" + v.name + "'");
  }
}

const Variable& Space::var(VarId id) const {
  if (id >= vars_.size()) throw ScopeError("variable id out of range");
  return vars_[id];
}

std::uint32_t Space::card(VarId id) const {
  return static_cast<std::uint32_t>(var(id).domain.size());
}

std::optional<VarId> Space::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VarId Space::id_of(std::string_view name) const {
  auto id = find(name);
  if (!id) throw SchemaError("unknown variable '" + std::string(name) + "'");
  return *id;
}

std::optional<std::uint32_t> Space::value_index(VarId id, std::string_view label) const {
  const auto& dom = var(id).domain;
  for (std::uint32_t i = 0; i < dom.size(); ++i)
    if (dom[i] == label) return i;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Scope

Scope::Scope(std::vector<VarId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end())
    throw ScopeError("scope contains a duplicate variable");
}

bool Scope::contains(VarId id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

bool Scope::subset_of(const Scope& other) const {
  return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

Scope Scope::unite(const Scope& other) const {
  std::vector<VarId> out;
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                 std::back_inserter(out));
  Scope s;
  s.ids_ = std::move(out);
  return s;
}

Scope Scope::intersect(const Scope& other) const {
  std::vector<VarId> out;
  std::set_intersection(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                        std::back_inserter(out));
  Scope s;
  s.ids_ = std::move(out);
  return s;
}

Scope Scope::minus(const Scope& other) const {
  std::vector<VarId> out;
  std::set_difference(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                      std::back_inserter(out));
  Scope s;
  s.ids_ = std::move(out);
  return s;
}

// ---------------------------------------------------------------------------
// ConfigSet

ConfigSet ConfigSet::none(std::uint64_t universe) {
  ConfigSet s;
  s.n_ = universe;
  return s;
}

ConfigSet ConfigSet::all(std::uint64_t universe) {
  ConfigSet s;
  s.n_ = universe;
  if (universe <= 64) {
    s.mask_ = (universe == 64) ? ~0ull : ((1ull << universe) - 1);
  } else {
    s.idx_.resize(universe);
    for (std::uint64_t i = 0; i < universe; ++i) s.idx_[i] = i;
  }
  return s;
}

ConfigSet ConfigSet::of(std::uint64_t universe, std::span<const std::uint64_t> indices) {
  ConfigSet s = none(universe);
  for (std::uint64_t i : indices) s.insert(i);
  return s;
}

ConfigSet ConfigSet::single(std::uint64_t universe, std::uint64_t index) {
  ConfigSet s = none(universe);
  s.insert(index);
  return s;
}

std::uint64_t ConfigSet::count() const {
  if (n_ <= 64) return static_cast<std::uint64_t>(std::popcount(mask_));
  return idx_.size();
}

bool ConfigSet::empty() const {
  return n_ <= 64 ? mask_ == 0 : idx_.empty();
}

bool ConfigSet::contains(std::uint64_t index) const {
  if (index >= n_) return false;
  if (n_ <= 64) return (mask_ >> index) & 1ull;
  return std::binary_search(idx_.begin(), idx_.end(), index);
}

void ConfigSet::insert(std::uint64_t index) {
  if (index >= n_) throw ScopeError("configuration index out of range");
  if (n_ <= 64) {
    mask_ |= 1ull << index;
  } else {
    auto it = std::lower_bound(idx_.begin(), idx_.end(), index);
    if (it == idx_.end() || *it != index) idx_.insert(it, index);
  }
}

void ConfigSet::check_same_universe(const ConfigSet& other) const {
  if (n_ != other.n_) throw ScopeError("configuration sets have different universes");
}

bool ConfigSet::subset_of(const ConfigSet& other) const {
  check_same_universe(other);
  if (n_ <= 64) return (mask_ & ~other.mask_) == 0;
  return std::includes(other.idx_.begin(), other.idx_.end(), idx_.begin(), idx_.end());
}

bool ConfigSet::intersects(const ConfigSet& other) const {
  check_same_universe(other);
  if (n_ <= 64) return (mask_ & other.mask_) != 0;
  auto a = idx_.begin();
  auto b = other.idx_.begin();
  while (a != idx_.end() && b != other.idx_.end()) {
    if (*a == *b) return true;
    if (*a < *b) ++a; else ++b;
  }
  return false;
}

ConfigSet ConfigSet::intersect(const ConfigSet& other) const {
  check_same_universe(other);
  ConfigSet out = none(n_);
  if (n_ <= 64) {
    out.mask_ = mask_ & other.mask_;
  } else {
    std::set_intersection(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(),
                          std::back_inserter(out.idx_));
  }
  return out;
}

ConfigSet ConfigSet::unite(const ConfigSet& other) const {
  check_same_universe(other);
  ConfigSet out = none(n_);
  if (n_ <= 64) {
    out.mask_ = mask_ | other.mask_;
  } else {
    std::set_union(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(),
                   std::back_inserter(out.idx_));
  }
  return out;
}

ConfigSet ConfigSet::complement() const {
  ConfigSet out = none(n_);
  if (n_ <= 64) {
    out.mask_ = ~mask_ & all(n_).mask_;
  } else {
    auto it = idx_.begin();
    for (std::uint64_t i = 0; i < n_; ++i) {
      if (it != idx_.end() && *it == i) { ++it; continue; }
      out.idx_.push_back(i);
    }
  }
  return out;
}

std::vector<std::uint64_t> ConfigSet::indices() const {
  std::vector<std::uint64_t> out;
  out.reserve(count());
  for_each([&](std::uint64_t i) { out.push_back(i); });
  return out;
}

std::uint64_t ConfigSet::mask() const {
  if (n_ > 64) throw SizeGuardError("configuration universe exceeds 64; no mask form");
  return mask_;
}

bool ConfigSet::operator==(const ConfigSet& other) const {
  if (n_ != other.n_) return false;
  return n_ <= 64 ? mask_ == other.mask_ : idx_ == other.idx_;
}

bool ConfigSet::operator<(const ConfigSet& other) const {
  check_same_universe(other);
  return n_ <= 64 ? mask_ < other.mask_ : idx_ < other.idx_;
}

// ---------------------------------------------------------------------------
// Configuration geometry

std::uint64_t config_count(const Space& space, const Scope& scope) {
  std::uint64_t n = 1;
  for (VarId id : scope.ids()) n *= space.card(id);
  return n;
}

namespace {

// Strides in scope order, last variable fastest.
std::vector<std::uint64_t> strides_of(const Space& space, const Scope& scope) {
  const auto& ids = scope.ids();
  std::vector<std::uint64_t> st(ids.size(), 1);
  for (std::size_t i = ids.size(); i-- > 1;)
    st[i - 1] = st[i] * space.card(ids[i]);
  return st;
}

}  // namespace

std::uint64_t encode_config(const Space& space, const Scope& scope,
                            std::span<const std::uint32_t> digits) {
  const auto& ids = scope.ids();
  if (digits.size() != ids.size()) throw ScopeError("digit count does not match scope size");
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (digits[i] >= space.card(ids[i])) throw ScopeError("configuration digit out of range");
    idx = idx * space.card(ids[i]) + digits[i];
  }
  return idx;
}

std::vector<std::uint32_t> decode_config(const Space& space, const Scope& scope,
                                         std::uint64_t index) {
  const auto& ids = scope.ids();
  std::vector<std::uint32_t> digits(ids.size());
  for (std::size_t i = ids.size(); i-- > 0;) {
    const std::uint32_t c = space.card(ids[i]);
    digits[i] = static_cast<std::uint32_t>(index % c);
    index /= c;
  }
  if (index != 0) throw ScopeError("configuration index out of range");
  return digits;
}

Event empty_event(const Space& space, const Scope& scope) {
  return Event{scope, ConfigSet::none(config_count(space, scope))};
}

Event full_event(const Space& space, const Scope& scope) {
  return Event{scope, ConfigSet::all(config_count(space, scope))};
}

Event event_of(const Space& space, const Scope& scope,
               const std::vector<std::vector<std::uint32_t>>& rows) {
  Event e = empty_event(space, scope);
  for (const auto& row : rows) e.configs.insert(encode_config(space, scope, row));
  return e;
}

// ---------------------------------------------------------------------------
// Projection / extension

Projector::Projector(const Space& space, const Scope& from, const Scope& to) {
  if (!to.subset_of(from)) throw ScopeError("projection target is not a subscope");
  const auto in_strides = strides_of(space, from);
  const auto out_strides = strides_of(space, to);
  const auto& fids = from.ids();
  const auto& tids = to.ids();
  std::size_t j = 0;
  for (std::size_t i = 0; i < fids.size() && j < tids.size(); ++i) {
    if (fids[i] == tids[j]) {
      digits_.push_back({in_strides[i], space.card(fids[i]), out_strides[j]});
      ++j;
    }
  }
}

std::uint64_t Projector::operator()(std::uint64_t index) const {
  std::uint64_t out = 0;
  for (const Digit& d : digits_)
    out += ((index / d.in_stride) % d.card) * d.out_stride;
  return out;
}

Event project(const Space& space, const Event& e, const Scope& sub) {
  Projector proj(space, e.scope, sub);
  ConfigSet out = ConfigSet::none(config_count(space, sub));
  e.configs.for_each([&](std::uint64_t i) { out.insert(proj(i)); });
  return Event{sub, out};
}

Event extend(const Space& space, const Event& e, const Scope& super) {
  if (!e.scope.subset_of(super)) throw ScopeError("extension target does not contain the scope");
  // Free variables: super \ scope.  Every combination of free digits is
  // merged with every base configuration of e.
  const Scope free = super.minus(e.scope);
  const auto super_strides = strides_of(space, super);
  const auto& sids = super.ids();

  std::vector<std::uint64_t> base_stride;   // stride in super for each scope var
  std::vector<std::uint64_t> free_stride;   // stride in super for each free var
  std::vector<std::uint32_t> free_card;
  {
    std::size_t jb = 0, jf = 0;
    const auto& bids = e.scope.ids();
    const auto& fids = free.ids();
    for (std::size_t i = 0; i < sids.size(); ++i) {
      if (jb < bids.size() && sids[i] == bids[jb]) {
        base_stride.push_back(super_strides[i]);
        ++jb;
      } else if (jf < fids.size() && sids[i] == fids[jf]) {
        free_stride.push_back(super_strides[i]);
        free_card.push_back(space.card(sids[i]));
        ++jf;
      }
    }
  }

  // Base offsets in the super index for each configuration of e.
  std::vector<std::uint64_t> base_offsets;
  base_offsets.reserve(e.configs.count());
  e.configs.for_each([&](std::uint64_t idx) {
    const auto digits = decode_config(space, e.scope, idx);
    std::uint64_t off = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) off += digits[i] * base_stride[i];
    base_offsets.push_back(off);
  });

  ConfigSet out = ConfigSet::none(config_count(space, super));
  std::vector<std::uint32_t> fd(free_card.size(), 0);
  while (true) {
    std::uint64_t free_off = 0;
    for (std::size_t i = 0; i < fd.size(); ++i) free_off += fd[i] * free_stride[i];
    for (std::uint64_t b : base_offsets) out.insert(b + free_off);
    // Odometer over free digits.
    std::size_t k = fd.size();
    while (k > 0) {
      --k;
      if (++fd[k] < free_card[k]) break;
      fd[k] = 0;
      if (k == 0) { k = SIZE_MAX; break; }
    }
    if (fd.empty() || k == SIZE_MAX) break;
  }
  return Event{super, out};
}

Event complement(const Event& e) {
  return Event{e.scope, e.configs.complement()};
}

Event rectangularize(const Space& space, const Event& e,
                     const std::vector<Scope>& cliques) {
  if (cliques.empty()) {
    if (e.configs.full()) return e;
    throw ConfigError("rectangularize: empty clique list can only represent the full event");
  }
  Event box = full_event(space, e.scope);
  for (const Scope& c : cliques) {
    const Scope local = c.intersect(e.scope);
    const Event cyl = extend(space, project(space, e, local), e.scope);
    box.configs = box.configs.intersect(cyl.configs);
  }
  return box;
}

}  // namespace capax
