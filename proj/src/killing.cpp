#include "affkit/killing.hpp"

#include <map>

namespace affkit {

Jet1::Jet1(const ScalarVec& s) {
  if (s.size() != 6) throw std::invalid_argument("a 1-jet has 6 entries");
  for (int i = 0; i < 6; ++i) v[i] = s[i];
}

bool Jet1::is_zero() const {
  for (const Scalar& s : v)
    if (!s.is_zero()) return false;
  return true;
}

std::array<double, 6> to_double(const Jet1& v) {
  std::array<double, 6> out;
  for (int i = 0; i < 6; ++i) {
    if (!v[i].is_real()) throw std::invalid_argument("cannot transport a complex jet numerically");
    out[i] = v[i].re().get_d();
  }
  return out;
}

namespace {

Var var(int i) { return static_cast<Var>(i); }

// Row coefficients of d_i d_j a^k solved from K_{ij}^k:
// d_i d_j a^k = -sum_l [a^l d_l G_ij^k - G_ij^l b^k_l + G_il^k b^l_j + G_lj^k b^l_i].
ExprRow second_derivative_row(const AffineSurface& s, int i, int j, int k) {
  ExprRow row;
  for (int l = 0; l < 2; ++l) {
    row[jet_a(l)] -= s.gamma(i, j, k).diff(var(l));
    row[jet_b(k, l)] += s.gamma(i, j, l);
    row[jet_b(l, j)] -= s.gamma(i, l, k);
    row[jet_b(l, i)] -= s.gamma(l, j, k);
  }
  return row;
}

ExprMatrix mat_mul(const ExprMatrix& a, const ExprMatrix& b) {
  ExprMatrix out;
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c)
      for (int k = 0; k < 6; ++k) {
        if (!a[r][k].is_zero() && !b[k][c].is_zero()) out[r][c] += a[r][k] * b[k][c];
      }
  return out;
}

ExprRow row_times(const ExprRow& row, const ExprMatrix& m) {
  ExprRow out;
  for (int c = 0; c < 6; ++c)
    for (int r = 0; r < 6; ++r) {
      if (!row[r].is_zero() && !m[r][c].is_zero()) out[c] += row[r] * m[r][c];
    }
  return out;
}

bool row_is_zero(const ExprRow& row) {
  for (const Expr& e : row)
    if (!e.is_zero()) return false;
  return true;
}

ScalarVec eval_row(const ExprRow& row, const RationalPoint& p) {
  ScalarVec out(6);
  for (int c = 0; c < 6; ++c) out[c] = row[c].eval_exact(p.x1, p.x2);
  return out;
}

// Incremental echelon basis of the span of constraint rows over the constant
// field. The derivation L -> d_i L + L M_i is linear over constants, so only
// rows that leave the span need to be prolonged.
class RowSpan {
 public:
  struct Entry {
    int slot;
    Term term;
  };
  using Sparse = std::vector<Entry>;

  // Returns true and appends the reduced row when `row` is independent.
  bool insert(const ExprRow& row, ExprRow& reduced) {
    Sparse v = to_sparse(row);
    while (!v.empty()) {
      auto it = pivots_.find(v.front());
      if (it == pivots_.end()) break;
      const Sparse& b = basis_[it->second];
      Scalar factor = v.front().term.coeff / b.front().term.coeff;
      v = axpy(v, -factor, b);
    }
    if (v.empty()) return false;
    pivots_.emplace(v.front(), basis_.size());
    basis_.push_back(v);
    reduced = from_sparse(v);
    return true;
  }

 private:
  static int compare(const Entry& a, const Entry& b) {
    if (a.slot != b.slot) return a.slot < b.slot ? -1 : 1;
    return Term::compare_key(a.term, b.term);
  }
  struct Less {
    bool operator()(const Entry& a, const Entry& b) const { return compare(a, b) < 0; }
  };

  static Sparse to_sparse(const ExprRow& row) {
    Sparse v;
    for (int slot = 0; slot < 6; ++slot)
      for (const Term& t : row[slot].terms()) v.push_back({slot, t});
    return v;
  }

  static ExprRow from_sparse(const Sparse& v) {
    std::array<std::vector<Term>, 6> parts;
    for (const Entry& e : v) parts[e.slot].push_back(e.term);
    ExprRow row;
    for (int slot = 0; slot < 6; ++slot) row[slot] = Expr::from_terms(parts[slot]);
    return row;
  }

  // a + k b
  static Sparse axpy(const Sparse& a, const Scalar& k, const Sparse& b) {
    Sparse out;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
      int c = i == a.size() ? 1 : (j == b.size() ? -1 : compare(a[i], b[j]));
      if (c < 0) {
        out.push_back(a[i++]);
      } else if (c > 0) {
        Entry e = b[j++];
        e.term.coeff *= k;
        out.push_back(e);
      } else {
        Entry e = a[i++];
        e.term.coeff += k * b[j++].term.coeff;
        if (!e.term.coeff.is_zero()) out.push_back(e);
      }
    }
    return out;
  }

  std::vector<Sparse> basis_;
  std::map<Entry, std::size_t, Less> pivots_;
};

}  // namespace

KillingSystem::KillingSystem(AffineSurface s) : surface_(std::move(s)) {
  std::array<std::array<ExprRow, 2>, 4> f;  // f[2i+j][k]
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) f[2 * i + j][k] = second_derivative_row(surface_, i, j, k);

  for (int i = 0; i < 2; ++i) {
    ExprMatrix& m = m_[i];
    for (int k = 0; k < 2; ++k) {
      m[jet_a(k)][jet_b(k, i)] = Expr(1);
      for (int j = 0; j < 2; ++j) {
        // d_i b^k_j = d_i d_j a^k; the mixed partial always comes from K_12.
        int lo = std::min(i, j);
        int hi = std::max(i, j);
        m[jet_b(k, j)] = f[2 * lo + hi][k];
      }
    }
  }

  for (int k = 0; k < 2; ++k) {
    ExprRow row;
    for (int c = 0; c < 6; ++c) row[c] = f[1][k][c] - f[2][k][c];
    c0_.push_back(row);
  }

  ExprMatrix omega = mat_mul(m_[1], m_[0]);
  ExprMatrix m01 = mat_mul(m_[0], m_[1]);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) omega[r][c] += m_[1][r][c].diff(Var::x1) - m_[0][r][c].diff(Var::x2) - m01[r][c];
  for (const ExprRow& row : omega) {
    if (!row_is_zero(row)) omega_.push_back(row);
  }
}

Residuals KillingSystem::residuals(const VectorField& x) const {
  const AffineSurface& s = surface_;
  Residuals out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        Expr e = x[k].diff(var(i)).diff(var(j));
        for (int l = 0; l < 2; ++l) {
          e += x[l] * s.gamma(i, j, k).diff(var(l)) - s.gamma(i, j, l) * x[k].diff(var(l)) +
               s.gamma(i, l, k) * x[l].diff(var(j)) + s.gamma(l, j, k) * x[l].diff(var(i));
        }
        out[gamma_index(i, j, k)] = e;
      }
  return out;
}

bool KillingSystem::is_killing(const VectorField& x) const {
  for (const Expr& r : residuals(x))
    if (!r.is_zero()) return false;
  return true;
}

Prolongation KillingSystem::prolongation_at(const RationalPoint& p) const {
  Prolongation out;
  for (int i = 0; i < 2; ++i) {
    out.M[i] = ExactMatrix(6, 6);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) out.M[i](r, c) = m_[i][r][c].eval_exact(p.x1, p.x2);
  }
  out.c0 = ExactMatrix(0, 6);
  for (const ExprRow& row : c0_) out.c0.append_row(eval_row(row, p));
  out.integrability = ExactMatrix(0, 6);
  for (const ExprRow& row : omega_) out.integrability.append_row(eval_row(row, p));
  return out;
}

KillingJetSpace KillingSystem::jet_space() const {
  const RationalPoint& p = surface_.basepoint();
  RowSpan span;
  ExactMatrix evaluated(0, 6);
  std::vector<ExprRow> frontier;
  auto add = [&](const ExprRow& row) {
    ExprRow reduced;
    if (span.insert(row, reduced)) {
      evaluated.append_row(eval_row(reduced, p));
      frontier.push_back(reduced);
    }
  };
  for (const ExprRow& row : c0_) add(row);
  for (const ExprRow& row : omega_) add(row);

  KillingJetSpace out;
  auto current_dim = [&] { return 6 - static_cast<int>(rank(evaluated)); };
  out.constraint_history.push_back(current_dim());

  bool stable = false;
  for (int round = 1; round <= kStabilizationCap; ++round) {
    std::vector<ExprRow> previous = std::move(frontier);
    frontier.clear();
    for (const ExprRow& row : previous) {
      for (int i = 0; i < 2; ++i) {
        ExprRow d = row_times(row, m_[i]);
        for (int c = 0; c < 6; ++c) d[c] += row[c].diff(var(i));
        add(d);
      }
    }
    int dim = current_dim();
    int before = out.constraint_history.back();
    out.constraint_history.push_back(dim);
    if (frontier.empty() || dim == before) {
      stable = true;
      break;
    }
  }
  if (!stable) {
    throw NoStabilization("Killing jet space did not stabilize within " + std::to_string(kStabilizationCap) +
                          " prolongation rounds");
  }

  std::vector<ScalarVec> kernel = evaluated.rows() == 0 ? std::vector<ScalarVec>{} : nullspace(evaluated);
  if (evaluated.rows() == 0) {
    for (int i = 0; i < 6; ++i) {
      ScalarVec e(6);
      e[i] = Scalar(1);
      kernel.push_back(e);
    }
  }
  for (const ScalarVec& v : kernel) out.basis.emplace_back(v);
  out.dim = static_cast<int>(out.basis.size());
  return out;
}

Jet1 KillingSystem::jet_of(const VectorField& x) const {
  const RationalPoint& p = surface_.basepoint();
  Jet1 j;
  for (int k = 0; k < 2; ++k) {
    j[jet_a(k)] = x[k].eval_exact(p.x1, p.x2);
    for (int i = 0; i < 2; ++i) j[jet_b(k, i)] = x[k].diff(var(i)).eval_exact(p.x1, p.x2);
  }
  return j;
}

Residuals residuals(const AffineSurface& s, const VectorField& x) { return KillingSystem(s).residuals(x); }
bool is_killing(const AffineSurface& s, const VectorField& x) { return KillingSystem(s).is_killing(x); }
Prolongation prolongation(const AffineSurface& s, const RationalPoint& p) {
  return KillingSystem(s).prolongation_at(p);
}
KillingJetSpace killing_jet_space(const AffineSurface& s) { return KillingSystem(s).jet_space(); }
Jet1 jet_of(const AffineSurface& s, const VectorField& x) { return KillingSystem(s).jet_of(x); }

JetValue extend_jet(const KillingSystem& sys, const Jet1& v, const Point& q, double step) {
  if (!(step > 0)) throw std::invalid_argument("step must be positive");
  const Point p = sys.surface().basepoint_numeric();
  if (!sys.surface().in_domain(q)) throw DomainExit("target point leaves the surface domain");
  std::array<double, 6> out;
  try {
    out = sys.transport<double>(to_double(v), q, leg_steps(q[0] - p[0], step), leg_steps(q[1] - p[1], step));
  } catch (const PoleError& e) {
    throw DomainExit(std::string("pole on transport path: ") + e.what());
  }
  return {{out[0], out[1]}, {out[2], out[3], out[4], out[5]}};
}

JetValue extend_jet(const AffineSurface& s, const Jet1& v, const Point& q, double step) {
  return extend_jet(KillingSystem(s), v, q, step);
}

}  // namespace affkit
