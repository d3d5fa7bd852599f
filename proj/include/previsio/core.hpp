#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "previsio/error.hpp"
#include "previsio/rational.hpp"

namespace previsio {

/// Dynamic bitset over atom indices. Ordered by (cardinality, words) so that
/// enumeration over sets of atoms is reproducible.
class AtomSet {
 public:
  AtomSet() = default;
  explicit AtomSet(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  static AtomSet full(std::size_t size) {
    AtomSet s(size);
    for (std::size_t i = 0; i < size; ++i) s.insert(i);
    return s;
  }

  std::size_t size() const { return size_; }
  bool contains(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  void insert(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void erase(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
  }

  AtomSet operator&(const AtomSet& o) const {
    AtomSet r(*this);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }
  AtomSet operator|(const AtomSet& o) const {
    AtomSet r(*this);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] |= o.words_[i];
    return r;
  }
  /// Set difference.
  AtomSet operator-(const AtomSet& o) const {
    AtomSet r(*this);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= ~o.words_[i];
    return r;
  }
  AtomSet complement() const { return full(size_) - *this; }

  bool intersects(const AtomSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }
  bool subset_of(const AtomSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size_; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  friend bool operator==(const AtomSet& a, const AtomSet& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }
  friend bool operator<(const AtomSet& a, const AtomSet& b) {
    auto ca = a.count(), cb = b.count();
    if (ca != cb) return ca < cb;
    return a.words_ < b.words_;
  }

  std::size_t hash() const {
    std::size_t h = size_;
    for (auto w : words_) h = h * 1099511628211ull ^ static_cast<std::size_t>(w);
    return h;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct AtomSetHash {
  std::size_t operator()(const AtomSet& s) const { return s.hash(); }
};

/// Finite set of mutually exclusive, exhaustive atoms. Immutable.
class PossibilitySpace {
 public:
  static std::shared_ptr<const PossibilitySpace> create(std::vector<std::string> atoms) {
    if (atoms.empty()) throw Error(Errc::InvalidSpace, "a possibility space needs at least one atom");
    std::unordered_set<std::string> seen;
    for (const auto& a : atoms)
      if (!seen.insert(a).second) throw Error(Errc::InvalidSpace, "duplicate atom \"" + a + "\"");
    return std::shared_ptr<const PossibilitySpace>(new PossibilitySpace(std::move(atoms)));
  }

  std::size_t size() const { return atoms_.size(); }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::string& atom(std::size_t i) const { return atoms_[i]; }

  std::optional<std::size_t> index_of(const std::string& name) const {
    auto it = std::find(atoms_.begin(), atoms_.end(), name);
    if (it == atoms_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - atoms_.begin());
  }

  friend bool operator==(const PossibilitySpace& a, const PossibilitySpace& b) {
    return a.atoms_ == b.atoms_;
  }

 private:
  explicit PossibilitySpace(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {}
  std::vector<std::string> atoms_;
};

using SpaceRef = std::shared_ptr<const PossibilitySpace>;

namespace detail {

inline void require_same_space(const SpaceRef& a, const SpaceRef& b) {
  if (a == b) return;
  if (!a || !b || !(*a == *b)) throw Error(Errc::SpaceMismatch, "operands live on different possibility spaces");
}

}  // namespace detail

class Event {
 public:
  Event(SpaceRef space, AtomSet members) : space_(std::move(space)), members_(std::move(members)) {
    if (members_.size() != space_->size()) throw Error(Errc::SpaceMismatch, "event size differs from its space");
  }

  static Event sure(const SpaceRef& space) { return Event(space, AtomSet::full(space->size())); }
  static Event impossible(const SpaceRef& space) { return Event(space, AtomSet(space->size())); }
  static Event of_indices(const SpaceRef& space, const std::vector<std::size_t>& indices) {
    AtomSet s(space->size());
    for (auto i : indices) {
      if (i >= space->size()) throw Error(Errc::SpaceMismatch, "atom index out of range");
      s.insert(i);
    }
    return Event(space, std::move(s));
  }
  static Event of_atoms(const SpaceRef& space, const std::vector<std::string>& names) {
    AtomSet s(space->size());
    for (const auto& n : names) {
      auto i = space->index_of(n);
      if (!i) throw Error(Errc::UnknownName, "unknown atom \"" + n + "\"");
      s.insert(*i);
    }
    return Event(space, std::move(s));
  }

  const SpaceRef& space() const { return space_; }
  const AtomSet& members() const { return members_; }
  bool contains(std::size_t atom) const { return members_.contains(atom); }
  bool is_impossible() const { return members_.empty(); }
  bool is_sure() const { return members_.count() == space_->size(); }
  bool implies(const Event& o) const {
    detail::require_same_space(space_, o.space_);
    return members_.subset_of(o.members_);
  }

  Event operator&(const Event& o) const {
    detail::require_same_space(space_, o.space_);
    return Event(space_, members_ & o.members_);
  }
  Event operator|(const Event& o) const {
    detail::require_same_space(space_, o.space_);
    return Event(space_, members_ | o.members_);
  }
  Event operator!() const { return Event(space_, members_.complement()); }

  std::vector<std::string> atom_names() const {
    std::vector<std::string> out;
    for (auto i : members_.members()) out.push_back(space_->atom(i));
    return out;
  }

  friend bool operator==(const Event& a, const Event& b) {
    detail::require_same_space(a.space_, b.space_);
    return a.members_ == b.members_;
  }

 private:
  SpaceRef space_;
  AtomSet members_;
};

/// Bounded random variable: one exact value per atom.
class RandomVariable {
 public:
  RandomVariable(SpaceRef space, std::vector<Rational> values)
      : space_(std::move(space)), values_(std::move(values)) {
    if (values_.size() != space_->size())
      throw Error(Errc::SpaceMismatch, "a random variable needs exactly one value per atom");
  }

  static RandomVariable constant(const SpaceRef& space, const Rational& c) {
    return RandomVariable(space, std::vector<Rational>(space->size(), c));
  }
  /// de Finetti's convention: an event doubles as its 0/1 indicator.
  static RandomVariable indicator(const Event& e) {
    std::vector<Rational> v(e.space()->size(), Rational(0));
    for (auto i : e.members().members()) v[i] = 1;
    return RandomVariable(e.space(), std::move(v));
  }

  const SpaceRef& space() const { return space_; }
  const std::vector<Rational>& values() const { return values_; }
  const Rational& operator[](std::size_t atom) const { return values_[atom]; }

  /// Pointwise combination.
  template <class F>
  RandomVariable map(const RandomVariable& o, F&& f) const {
    detail::require_same_space(space_, o.space_);
    std::vector<Rational> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(values_[i], o.values_[i]);
    return RandomVariable(space_, std::move(v));
  }
  template <class F>
  RandomVariable map(F&& f) const {
    std::vector<Rational> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(values_[i]);
    return RandomVariable(space_, std::move(v));
  }

  RandomVariable operator+(const RandomVariable& o) const {
    return map(o, [](const Rational& a, const Rational& b) { return a + b; });
  }
  RandomVariable operator-(const RandomVariable& o) const {
    return map(o, [](const Rational& a, const Rational& b) { return a - b; });
  }
  RandomVariable operator*(const RandomVariable& o) const {
    return map(o, [](const Rational& a, const Rational& b) { return a * b; });
  }
  RandomVariable operator-() const {
    return map([](const Rational& a) { return Rational(-a); });
  }
  RandomVariable scaled(const Rational& k) const {
    return map([&](const Rational& a) { return Rational(a * k); });
  }
  RandomVariable shifted(const Rational& c) const {
    return map([&](const Rational& a) { return Rational(a + c); });
  }
  RandomVariable times(const Event& e) const { return *this * indicator(e); }

  Rational sup() const { return *std::max_element(values_.begin(), values_.end()); }
  Rational inf() const { return *std::min_element(values_.begin(), values_.end()); }

  friend bool operator==(const RandomVariable& a, const RandomVariable& b) {
    detail::require_same_space(a.space_, b.space_);
    return a.values_ == b.values_;
  }

 private:
  SpaceRef space_;
  std::vector<Rational> values_;
};

/// X|B in canonical form: values outside B are zeroed, so two conditional
/// variables compare equal exactly when B agrees and X agrees on B.
class ConditionalVariable {
 public:
  ConditionalVariable(const RandomVariable& x, Event cond)
      : variable_(canonical(x, cond)), cond_(std::move(cond)) {}

  const RandomVariable& variable() const { return variable_; }
  const Event& cond() const { return cond_; }
  const SpaceRef& space() const { return cond_.space(); }

  /// Value on an atom of the conditioning event.
  const Rational& value(std::size_t atom) const { return variable_[atom]; }

  /// The stored variable with zeros off the conditioning event.
  const RandomVariable& as_variable_on_cond() const { return variable_; }

  friend bool operator==(const ConditionalVariable& a, const ConditionalVariable& b) {
    return a.cond_ == b.cond_ && a.variable_ == b.variable_;
  }

 private:
  static RandomVariable canonical(const RandomVariable& x, const Event& cond) {
    detail::require_same_space(x.space(), cond.space());
    if (cond.is_impossible())
      throw Error(Errc::ImpossibleConditioningEvent, "cannot condition on the impossible event");
    std::vector<Rational> v(x.values().size(), Rational(0));
    for (auto i : cond.members().members()) v[i] = x[i];
    return RandomVariable(x.space(), std::move(v));
  }

  RandomVariable variable_;
  Event cond_;
};

inline ConditionalVariable restrict(const RandomVariable& x, const Event& b) { return ConditionalVariable(x, b); }

inline Rational cond_sup(const ConditionalVariable& cv) {
  auto atoms = cv.cond().members().members();
  Rational best = cv.value(atoms.front());
  for (auto i : atoms) best = std::max(best, cv.value(i));
  return best;
}

inline Rational cond_inf(const ConditionalVariable& cv) {
  auto atoms = cv.cond().members().members();
  Rational best = cv.value(atoms.front());
  for (auto i : atoms) best = std::min(best, cv.value(i));
  return best;
}

struct AssessmentEntry {
  ConditionalVariable target;
  Rational lower;
  std::optional<Rational> upper;
  std::string var_label;
  std::string given_label;

  bool is_precise() const { return upper && *upper == lower; }
  std::string label() const { return var_label + "|" + given_label; }
};

/// Lower (optionally upper) previsions on a finite list of conditional
/// variables. Keys are the (variable, conditioning) labels; two differently
/// labelled entries may denote the same conditional variable. Re-pricing
/// produces a copy carrying a fresh version number.
class Assessment {
 public:
  explicit Assessment(SpaceRef space) : space_(std::move(space)), version_(next_version()) {}

  const SpaceRef& space() const { return space_; }
  const std::vector<AssessmentEntry>& entries() const { return entries_; }
  const AssessmentEntry& operator[](std::size_t i) const { return entries_[i]; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::uint64_t version() const { return version_; }

  std::size_t add(const ConditionalVariable& cv, const Rational& lower, std::optional<Rational> upper = std::nullopt,
                  std::string var_label = {}, std::string given_label = {}) {
    detail::require_same_space(space_, cv.space());
    if (var_label.empty()) var_label = "x" + std::to_string(entries_.size());
    if (given_label.empty()) given_label = cv.cond().is_sure() ? "Omega" : "B" + std::to_string(entries_.size());
    for (const auto& e : entries_)
      if (e.var_label == var_label && e.given_label == given_label)
        throw Error(Errc::DuplicateEntry, "entry " + var_label + "|" + given_label + " assessed twice");
    entries_.push_back(AssessmentEntry{cv, lower, std::move(upper), std::move(var_label), std::move(given_label)});
    version_ = next_version();
    return entries_.size() - 1;
  }

  std::size_t add_precise(const ConditionalVariable& cv, const Rational& value, std::string var_label = {},
                          std::string given_label = {}) {
    return add(cv, value, value, std::move(var_label), std::move(given_label));
  }

  Assessment repriced(std::size_t index, const Rational& lower, std::optional<Rational> upper) const {
    Assessment copy(*this);
    copy.entries_.at(index).lower = lower;
    copy.entries_.at(index).upper = std::move(upper);
    copy.version_ = next_version();
    return copy;
  }

  std::optional<std::size_t> find(const ConditionalVariable& cv) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (entries_[i].target == cv) return i;
    return std::nullopt;
  }
  std::optional<std::size_t> find_label(const std::string& var_label, const std::string& given_label) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (entries_[i].var_label == var_label && entries_[i].given_label == given_label) return i;
    return std::nullopt;
  }

  bool all_precise() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.is_precise(); });
  }
  bool all_unconditional() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.target.cond().is_sure(); });
  }

  /// Distinct conditioning events, in order of first appearance.
  std::vector<Event> conditioning_events() const {
    std::vector<Event> out;
    for (const auto& e : entries_)
      if (std::none_of(out.begin(), out.end(), [&](const Event& b) { return b == e.target.cond(); }))
        out.push_back(e.target.cond());
    return out;
  }

 private:
  static std::uint64_t next_version() {
    static std::atomic<std::uint64_t> counter{0};
    return ++counter;
  }

  SpaceRef space_;
  std::vector<AssessmentEntry> entries_;
  std::uint64_t version_;
};

}  // namespace previsio
