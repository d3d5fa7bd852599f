#pragma once

// Exact rational linear programming: two-phase primal simplex with Bland's rule.
//
// Programs are stated over variables with optional bounds and rows with
// relations <=, =, >=. Every outcome carries data that re-verifies with exact
// arithmetic: an attaining point, a Farkas certificate, or a feasible point
// plus an improving ray.

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "previsio/error.hpp"
#include "previsio/rational.hpp"

namespace previsio::lp {

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Maximize, Minimize };

struct Constraint {
  std::vector<Rational> coeffs;
  Relation relation;
  Rational rhs;
};

struct Bounds {
  std::optional<Rational> lower;
  std::optional<Rational> upper;
};

class LinearProgram {
 public:
  /// Variables default to x >= 0.
  explicit LinearProgram(std::size_t num_vars)
      : objective_(num_vars, Rational(0)), bounds_(num_vars, Bounds{Rational(0), std::nullopt}) {}

  std::size_t num_vars() const { return objective_.size(); }

  void set_objective(std::vector<Rational> coeffs, Sense sense) {
    objective_ = std::move(coeffs);
    sense_ = sense;
  }
  void add_constraint(std::vector<Rational> coeffs, Relation rel, Rational rhs) {
    constraints_.push_back(Constraint{std::move(coeffs), rel, std::move(rhs)});
  }
  void set_bounds(std::size_t var, std::optional<Rational> lower, std::optional<Rational> upper) {
    bounds_.at(var) = Bounds{std::move(lower), std::move(upper)};
  }
  void set_free(std::size_t var) { set_bounds(var, std::nullopt, std::nullopt); }

  const std::vector<Rational>& objective() const { return objective_; }
  Sense sense() const { return sense_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<Bounds>& bounds() const { return bounds_; }

  void validate() const {
    if (bounds_.size() != objective_.size())
      throw Error(Errc::MalformedProgram, "bounds and objective disagree on the number of variables");
    for (std::size_t r = 0; r < constraints_.size(); ++r)
      if (constraints_[r].coeffs.size() != objective_.size())
        throw Error(Errc::MalformedProgram, "row " + std::to_string(r) + " has arity " +
                                                std::to_string(constraints_[r].coeffs.size()) + ", expected " +
                                                std::to_string(objective_.size()));
  }

  /// Plain-text LP dump (CPLEX-like), used by the CLI debug flag.
  std::string to_text(const std::vector<std::string>& names = {}) const {
    auto name = [&](std::size_t j) { return j < names.size() ? names[j] : "x" + std::to_string(j); };
    auto term_list = [&](const std::vector<Rational>& c) {
      std::ostringstream os;
      bool first = true;
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] == 0) continue;
        os << (first ? (c[j] < 0 ? "-" : "") : (c[j] < 0 ? " - " : " + "));
        auto a = abs(c[j]);
        if (a != 1) os << to_string(a) << " ";
        os << name(j);
        first = false;
      }
      if (first) os << "0";
      return os.str();
    };
    std::ostringstream os;
    os << (sense_ == Sense::Maximize ? "Maximize" : "Minimize") << "\n obj: " << term_list(objective_) << "\n";
    os << "Subject To\n";
    for (std::size_t r = 0; r < constraints_.size(); ++r) {
      const auto& c = constraints_[r];
      os << " c" << r << ": " << term_list(c.coeffs) << " "
         << (c.relation == Relation::LessEqual ? "<=" : c.relation == Relation::Equal ? "=" : ">=") << " "
         << to_string(c.rhs) << "\n";
    }
    os << "Bounds\n";
    for (std::size_t j = 0; j < bounds_.size(); ++j) {
      const auto& b = bounds_[j];
      if (!b.lower && !b.upper) {
        os << " " << name(j) << " free\n";
        continue;
      }
      os << " " << (b.lower ? to_string(*b.lower) : "-inf") << " <= " << name(j) << " <= "
         << (b.upper ? to_string(*b.upper) : "+inf") << "\n";
    }
    os << "End\n";
    return os.str();
  }

 private:
  std::vector<Rational> objective_;
  Sense sense_ = Sense::Maximize;
  std::vector<Constraint> constraints_;
  std::vector<Bounds> bounds_;
};

/// Multipliers proving infeasibility. Each multiplier applies to its row read
/// in "<=" orientation (">=" rows are negated first); multipliers of "<=" and
/// ">=" rows and of bounds are nonnegative, those of "=" rows are free. The
/// weighted sum has zero coefficients and a negative right-hand side.
struct FarkasCertificate {
  std::vector<Rational> row_multipliers;
  std::vector<Rational> lower_bound_multipliers;  // on -x_j <= -l_j
  std::vector<Rational> upper_bound_multipliers;  // on  x_j <=  u_j
};

struct Optimal {
  Rational value;
  std::vector<Rational> point;
};
struct Infeasible {
  FarkasCertificate certificate;
};
struct Unbounded {
  std::vector<Rational> point;
  std::vector<Rational> ray;
};

struct SolveStats {
  std::size_t pivots = 0;
};

struct SolveResult {
  std::variant<Optimal, Infeasible, Unbounded> outcome;
  SolveStats stats;

  bool optimal() const { return std::holds_alternative<Optimal>(outcome); }
  bool infeasible() const { return std::holds_alternative<Infeasible>(outcome); }
  bool unbounded() const { return std::holds_alternative<Unbounded>(outcome); }
  const Optimal& as_optimal() const { return std::get<Optimal>(outcome); }
};

namespace detail {

/// Dense simplex on  max c.z  s.t.  A z = b, z >= 0  with b >= 0.
class StandardSimplex {
 public:
  StandardSimplex(std::vector<std::vector<Rational>> a, std::vector<Rational> b, std::vector<Rational> c)
      : m_(a.size()), n_(c.size()), c_(std::move(c)) {
    // Columns: n_ structural, then m_ artificials, then rhs.
    width_ = n_ + m_ + 1;
    t_.assign(m_, std::vector<Rational>(width_, Rational(0)));
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) t_[i][j] = a[i][j];
      t_[i][n_ + i] = 1;
      t_[i][width_ - 1] = b[i];
      basis_[i] = n_ + i;
    }
  }

  enum class Status { Optimal, Infeasible, Unbounded };

  Status run() {
    // Phase I: minimise the sum of artificials, i.e. maximise its negation.
    std::vector<Rational> phase1(n_ + m_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) phase1[n_ + i] = -1;
    allowed_ = n_ + m_;
    if (optimize(phase1) != Status::Optimal) throw Error(Errc::MalformedProgram, "phase I cannot be unbounded");
    Rational infeasibility = 0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= n_) infeasibility += t_[i][width_ - 1];
    if (infeasibility > 0) return Status::Infeasible;
    drive_out_artificials();
    allowed_ = n_;
    std::vector<Rational> phase2(c_);
    phase2.resize(n_ + m_, Rational(0));
    return optimize(phase2);
  }

  std::vector<Rational> solution() const {
    std::vector<Rational> z(n_, Rational(0));
    for (std::size_t i = 0; i < rows_active(); ++i)
      if (basis_[i] < n_) z[basis_[i]] = t_[i][width_ - 1];
    return z;
  }

  /// Improving direction in z-space after an Unbounded status.
  std::vector<Rational> ray() const {
    std::vector<Rational> d(n_, Rational(0));
    d[unbounded_column_] = 1;
    for (std::size_t i = 0; i < rows_active(); ++i)
      if (basis_[i] < n_) d[basis_[i]] = -t_[i][unbounded_column_];
    return d;
  }

  std::size_t pivots() const { return pivots_; }

 private:
  std::size_t rows_active() const { return t_.size(); }

  Status optimize(const std::vector<Rational>& cost) {
    for (;;) {
      // Reduced cost of column j: c_j - sum_i c_{B(i)} t_ij. Bland: first improving index.
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < allowed_ && !entering; ++j) {
        if (is_basic(j)) continue;
        Rational rc = cost[j];
        for (std::size_t i = 0; i < t_.size(); ++i)
          if (t_[i][j] != 0) rc -= cost[basis_[i]] * t_[i][j];
        if (rc > 0) entering = j;
      }
      if (!entering) return Status::Optimal;
      std::size_t col = *entering;
      std::optional<std::size_t> leave;
      Rational best_ratio;
      for (std::size_t i = 0; i < t_.size(); ++i) {
        if (t_[i][col] <= 0) continue;
        Rational ratio = t_[i][width_ - 1] / t_[i][col];
        if (!leave || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[*leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (!leave) {
        unbounded_column_ = col;
        return Status::Unbounded;
      }
      pivot(*leave, col);
    }
  }

  bool is_basic(std::size_t j) const {
    for (auto b : basis_)
      if (b == j) return true;
    return false;
  }

  void pivot(std::size_t row, std::size_t col) {
    ++pivots_;
    Rational p = t_[row][col];
    for (auto& v : t_[row])
      if (v != 0) v /= p;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == row || t_[i][col] == 0) continue;
      Rational f = t_[i][col];
      for (std::size_t j = 0; j < width_; ++j)
        if (t_[row][j] != 0) t_[i][j] -= f * t_[row][j];
    }
    basis_[row] = col;
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < t_.size();) {
      if (basis_[i] < n_) {
        ++i;
        continue;
      }
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < n_ && !col; ++j)
        if (t_[i][j] != 0) col = j;
      if (col) {
        pivot(i, *col);
        ++i;
      } else {
        // Redundant row.
        t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
  }

  std::size_t m_, n_, width_ = 0, allowed_ = 0;
  std::vector<Rational> c_;
  std::vector<std::vector<Rational>> t_;
  std::vector<std::size_t> basis_;
  std::size_t unbounded_column_ = 0;
  std::size_t pivots_ = 0;
};

/// Row of the program in "<=" or "=" orientation over the original variables.
struct CanonicalRow {
  std::vector<Rational> a;
  Rational b;
  bool equality;
};

}  // namespace detail

inline SolveResult solve(const LinearProgram& lp);

namespace detail {

/// Affine substitution x_j = offset_j + sum_k coeff_k z_k for one original variable.
struct VarMap {
  Rational offset;
  std::vector<std::pair<std::size_t, Rational>> parts;
};

inline FarkasCertificate farkas_from_alternative(const LinearProgram& lp);

}  // namespace detail

inline SolveResult solve(const LinearProgram& lp) {
  lp.validate();
  const std::size_t n = lp.num_vars();

  // Substitute bounded variables by nonnegative ones.
  std::vector<detail::VarMap> maps(n);
  std::size_t nz = 0;
  std::vector<std::pair<std::size_t, Rational>> extra_upper;  // z_k <= value
  for (std::size_t j = 0; j < n; ++j) {
    const auto& bd = lp.bounds()[j];
    if (bd.lower) {
      maps[j] = {*bd.lower, {{nz, Rational(1)}}};
      if (bd.upper) extra_upper.push_back({nz, *bd.upper - *bd.lower});
      ++nz;
    } else if (bd.upper) {
      maps[j] = {*bd.upper, {{nz, Rational(-1)}}};
      ++nz;
    } else {
      maps[j] = {Rational(0), {{nz, Rational(1)}, {nz + 1, Rational(-1)}}};
      nz += 2;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto& bd = lp.bounds()[j];
    if (bd.lower && bd.upper && *bd.upper < *bd.lower) {
      Infeasible inf;
      inf.certificate.row_multipliers.assign(lp.constraints().size(), Rational(0));
      inf.certificate.lower_bound_multipliers.assign(n, Rational(0));
      inf.certificate.upper_bound_multipliers.assign(n, Rational(0));
      inf.certificate.lower_bound_multipliers[j] = 1;
      inf.certificate.upper_bound_multipliers[j] = 1;
      Rational gap = *bd.upper - *bd.lower;
      inf.certificate.lower_bound_multipliers[j] = Rational(-1) / gap;
      inf.certificate.upper_bound_multipliers[j] = Rational(-1) / gap;
      return SolveResult{inf, {}};
    }
  }

  // Rows in standard form, one slack per inequality.
  std::size_t num_ineq = extra_upper.size();
  for (const auto& c : lp.constraints())
    if (c.relation != Relation::Equal) ++num_ineq;
  const std::size_t cols = nz + num_ineq;
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  std::size_t slack = nz;
  for (const auto& c : lp.constraints()) {
    std::vector<Rational> row(cols, Rational(0));
    Rational rhs = c.rhs;
    for (std::size_t j = 0; j < n; ++j) {
      if (c.coeffs[j] == 0) continue;
      rhs -= c.coeffs[j] * maps[j].offset;
      for (const auto& [k, f] : maps[j].parts) row[k] += c.coeffs[j] * f;
    }
    if (c.relation == Relation::LessEqual) row[slack++] = 1;
    if (c.relation == Relation::GreaterEqual) row[slack++] = -1;
    a.push_back(std::move(row));
    b.push_back(std::move(rhs));
  }
  for (const auto& [k, value] : extra_upper) {
    std::vector<Rational> row(cols, Rational(0));
    row[k] = 1;
    row[slack++] = 1;
    a.push_back(std::move(row));
    b.push_back(value);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] < 0) {
      for (auto& v : a[i]) v = -v;
      b[i] = -b[i];
    }
  }

  const bool maximize = lp.sense() == Sense::Maximize;
  std::vector<Rational> cost(cols, Rational(0));
  Rational cost_offset = 0;
  for (std::size_t j = 0; j < n; ++j) {
    Rational cj = maximize ? lp.objective()[j] : Rational(-lp.objective()[j]);
    if (cj == 0) continue;
    cost_offset += cj * maps[j].offset;
    for (const auto& [k, f] : maps[j].parts) cost[k] += cj * f;
  }

  detail::StandardSimplex simplex(std::move(a), std::move(b), std::move(cost));
  auto status = simplex.run();
  SolveStats stats{simplex.pivots()};

  auto to_x = [&](const std::vector<Rational>& z, bool affine) {
    std::vector<Rational> x(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = affine ? maps[j].offset : Rational(0);
      for (const auto& [k, f] : maps[j].parts) x[j] += f * z[k];
    }
    return x;
  };

  switch (status) {
    case detail::StandardSimplex::Status::Infeasible:
      return SolveResult{Infeasible{detail::farkas_from_alternative(lp)}, stats};
    case detail::StandardSimplex::Status::Unbounded:
      return SolveResult{Unbounded{to_x(simplex.solution(), true), to_x(simplex.ray(), false)}, stats};
    case detail::StandardSimplex::Status::Optimal: {
      auto x = to_x(simplex.solution(), true);
      Rational value = 0;
      for (std::size_t j = 0; j < n; ++j) value += lp.objective()[j] * x[j];
      return SolveResult{Optimal{value, std::move(x)}, stats};
    }
  }
  throw Error(Errc::MalformedProgram, "unreachable simplex status");
}

namespace detail {

/// Solves the Farkas alternative system, which is feasible exactly when the
/// primal is infeasible.
inline FarkasCertificate farkas_from_alternative(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars();
  const std::size_t r = lp.constraints().size();
  // Unknowns: one per row, then one per lower bound, then one per upper bound.
  const std::size_t total = r + 2 * n;
  LinearProgram alt(total);
  for (std::size_t i = 0; i < r; ++i)
    if (lp.constraints()[i].relation == Relation::Equal) alt.set_free(i);
  for (std::size_t j = 0; j < n; ++j) {
    if (!lp.bounds()[j].lower) alt.set_bounds(r + j, Rational(0), Rational(0));
    if (!lp.bounds()[j].upper) alt.set_bounds(r + n + j, Rational(0), Rational(0));
  }
  auto row_sign = [&](std::size_t i) {
    return lp.constraints()[i].relation == Relation::GreaterEqual ? Rational(-1) : Rational(1);
  };
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> coeffs(total, Rational(0));
    for (std::size_t i = 0; i < r; ++i) coeffs[i] = row_sign(i) * lp.constraints()[i].coeffs[j];
    coeffs[r + j] = -1;
    coeffs[r + n + j] = 1;
    alt.add_constraint(std::move(coeffs), Relation::Equal, Rational(0));
  }
  std::vector<Rational> rhs_row(total, Rational(0));
  for (std::size_t i = 0; i < r; ++i) rhs_row[i] = row_sign(i) * lp.constraints()[i].rhs;
  for (std::size_t j = 0; j < n; ++j) {
    if (lp.bounds()[j].lower) rhs_row[r + j] = -*lp.bounds()[j].lower;
    if (lp.bounds()[j].upper) rhs_row[r + n + j] = *lp.bounds()[j].upper;
  }
  alt.add_constraint(std::move(rhs_row), Relation::Equal, Rational(-1));
  auto res = solve(alt);
  if (!res.optimal()) throw Error(Errc::MalformedProgram, "Farkas alternative unexpectedly infeasible");
  const auto& y = res.as_optimal().point;
  FarkasCertificate cert;
  cert.row_multipliers.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(r));
  cert.lower_bound_multipliers.assign(y.begin() + static_cast<std::ptrdiff_t>(r),
                                      y.begin() + static_cast<std::ptrdiff_t>(r + n));
  cert.upper_bound_multipliers.assign(y.begin() + static_cast<std::ptrdiff_t>(r + n), y.end());
  return cert;
}

}  // namespace detail

/// True when the point satisfies every row and bound exactly.
inline bool is_feasible_point(const LinearProgram& lp, const std::vector<Rational>& x) {
  if (x.size() != lp.num_vars()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto& bd = lp.bounds()[j];
    if (bd.lower && x[j] < *bd.lower) return false;
    if (bd.upper && x[j] > *bd.upper) return false;
  }
  for (const auto& c : lp.constraints()) {
    Rational lhs = 0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += c.coeffs[j] * x[j];
    if (c.relation == Relation::LessEqual && lhs > c.rhs) return false;
    if (c.relation == Relation::GreaterEqual && lhs < c.rhs) return false;
    if (c.relation == Relation::Equal && lhs != c.rhs) return false;
  }
  return true;
}

/// Re-derives the contradiction 0 <= negative from the certificate.
inline bool verify_farkas(const LinearProgram& lp, const FarkasCertificate& cert) {
  const std::size_t n = lp.num_vars();
  const auto& rows = lp.constraints();
  if (cert.row_multipliers.size() != rows.size() || cert.lower_bound_multipliers.size() != n ||
      cert.upper_bound_multipliers.size() != n)
    return false;
  std::vector<Rational> combo(n, Rational(0));
  Rational rhs = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Rational& y = cert.row_multipliers[i];
    if (rows[i].relation != Relation::Equal && y < 0) return false;
    Rational sign = rows[i].relation == Relation::GreaterEqual ? Rational(-1) : Rational(1);
    for (std::size_t j = 0; j < n; ++j) combo[j] += y * sign * rows[i].coeffs[j];
    rhs += y * sign * rows[i].rhs;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Rational& yl = cert.lower_bound_multipliers[j];
    const Rational& yu = cert.upper_bound_multipliers[j];
    if (yl < 0 || yu < 0) return false;
    if (yl != 0) {
      if (!lp.bounds()[j].lower) return false;
      combo[j] -= yl;
      rhs -= yl * *lp.bounds()[j].lower;
    }
    if (yu != 0) {
      if (!lp.bounds()[j].upper) return false;
      combo[j] += yu;
      rhs += yu * *lp.bounds()[j].upper;
    }
  }
  for (const auto& c : combo)
    if (c != 0) return false;
  return rhs < 0;
}

/// Checks that the ray is a recession direction that strictly improves the objective.
inline bool verify_ray(const LinearProgram& lp, const Unbounded& u) {
  if (!is_feasible_point(lp, u.point)) return false;
  const std::size_t n = lp.num_vars();
  if (u.ray.size() != n) return false;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& bd = lp.bounds()[j];
    if (bd.lower && u.ray[j] < 0) return false;
    if (bd.upper && u.ray[j] > 0) return false;
  }
  for (const auto& c : lp.constraints()) {
    Rational d = 0;
    for (std::size_t j = 0; j < n; ++j) d += c.coeffs[j] * u.ray[j];
    if (c.relation == Relation::LessEqual && d > 0) return false;
    if (c.relation == Relation::GreaterEqual && d < 0) return false;
    if (c.relation == Relation::Equal && d != 0) return false;
  }
  Rational gain = 0;
  for (std::size_t j = 0; j < n; ++j) gain += lp.objective()[j] * u.ray[j];
  return lp.sense() == Sense::Maximize ? gain > 0 : gain < 0;
}

}  // namespace previsio::lp
