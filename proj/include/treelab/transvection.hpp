#pragma once

#include "treelab/errors.hpp"
#include "treelab/gf.hpp"

#include <optional>
#include <string>
#include <vector>

namespace treelab {

// t_{u,v}(xi) = I + u xi v with v.u = 0; equivalently a determinant-one
// matrix M != I whose residue M - I is rank one and squares to zero.
struct Transvection {
  GfVector u;  // column
  GfVector v;  // row
  std::uint32_t xi;
  std::uint32_t p;

  int n() const { return static_cast<int>(u.size()); }

  GfMatrix matrix() const {
    PrimeField f(p);
    GfMatrix m = GfMatrix::identity(n(), p);
    for (int i = 0; i < n(); ++i)
      for (int j = 0; j < n(); ++j)
        m.at(i, j) = f.add(m.at(i, j), f.mul(f.mul(u[i], xi), v[j]));
    return m;
  }

  Transvection inverted() const {
    PrimeField f(p);
    return Transvection{u, v, f.neg(xi), p};
  }
};

inline Transvection make_transvection(const GfVector& u, const GfVector& v, std::uint32_t xi,
                                      std::uint32_t p) {
  PrimeField f(p);
  if (u.size() != v.size()) throw PreconditionError("transvection: size mismatch");
  xi %= p;
  if (xi == 0 || is_zero_vector(u) || is_zero_vector(v))
    throw PreconditionError("transvection: zero parameter");
  if (dot(f, v, u) != 0) throw PreconditionError("transvection: v.u != 0");
  return Transvection{u, v, xi, p};
}

// Rank-one nilpotent-residue characterization; requires det(M) = 1.
inline bool is_transvection(const GfMatrix& m) {
  if (m.det() != 1) throw PreconditionError("is_transvection: determinant must be 1");
  if (m.is_identity()) return false;
  GfMatrix r = m - GfMatrix::identity(m.n(), m.p());
  if (r.rank() != 1) return false;
  return (r * r) == GfMatrix(m.n(), m.p());
}

// Recovers (u, v, xi = 1) from the rank-one residue; test cross-check path.
inline std::optional<Transvection> factor_transvection(const GfMatrix& m) {
  if (!is_transvection(m)) return std::nullopt;
  GfMatrix r = m - GfMatrix::identity(m.n(), m.p());
  PrimeField f(m.p());
  // first nonzero column is u up to scale; its row pattern gives v
  int col = -1, row = -1;
  for (int j = 0; j < m.n() && col < 0; ++j)
    for (int i = 0; i < m.n(); ++i)
      if (r.at(i, j)) {
        col = j;
        row = i;
        break;
      }
  GfVector u(m.n()), v(m.n());
  for (int i = 0; i < m.n(); ++i) u[i] = r.at(i, col);
  std::uint32_t scale = f.inv(r.at(row, col));
  for (int j = 0; j < m.n(); ++j) v[j] = f.mul(scale, r.at(row, j));
  return Transvection{u, v, 1, m.p()};
}

// [t1, t2] = t1 t2 t1^-1 t2^-1. With v.u = y.w = y.u = 0 the commutator
// collapses to t_{u,y}(xi (v.w) zeta), or to the identity when that
// parameter vanishes.
struct ChevalleyResult {
  GfMatrix commutator;
  std::uint32_t predicted_param;  // xi (v.w) zeta
  bool predicted_identity;
  bool matches;
};

inline ChevalleyResult chevalley_commutator(const Transvection& t1, const Transvection& t2) {
  if (t1.p != t2.p || t1.n() != t2.n())
    throw PreconditionError("chevalley: shape/field mismatch");
  PrimeField f(t1.p);
  if (dot(f, t2.v, t2.u) != 0 || dot(f, t1.v, t1.u) != 0 || dot(f, t2.v, t1.u) != 0)
    throw PreconditionError("chevalley: needs v.u = y.w = y.u = 0");
  GfMatrix a = t1.matrix(), b = t2.matrix();
  GfMatrix comm = a * b * a.inverse() * b.inverse();
  std::uint32_t param = f.mul(f.mul(t1.xi, dot(f, t1.v, t2.u)), t2.xi);
  ChevalleyResult res{comm, param, param == 0, false};
  if (param == 0)
    res.matches = comm.is_identity();
  else
    res.matches = comm == make_transvection(t1.u, t2.v, param, t1.p).matrix();
  return res;
}

// ---- transvection paths -------------------------------------------------------

// Certificate for one step of a path in the class of transvections: signs
// (eps, tau) such that a^eps b^tau lands back in the class, or the step
// collapsed because a degenerate middle element is the identity.
struct XPathStep {
  int eps = 1, tau = 1;
  bool product_in_class = false;
  bool collapsed = false;  // one endpoint is the identity placeholder
};

struct XPathCheck {
  bool ok = false;
  std::vector<XPathStep> steps;
  int failed_at = -1;
};

// Membership side of the path definition: each element is a transvection
// (the class equals its inverse closure), consecutive signed products fall
// back into the class.
inline XPathCheck is_x_path_transvections(const std::vector<GfMatrix>& seq) {
  XPathCheck res;
  if (seq.empty()) return res;
  for (const auto& m : seq)
    if (!is_transvection(m)) return res;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    XPathStep step;
    bool found = false;
    for (int eps : {1, -1}) {
      for (int tau : {1, -1}) {
        GfMatrix a = eps == 1 ? seq[i] : seq[i].inverse();
        GfMatrix b = tau == 1 ? seq[i + 1] : seq[i + 1].inverse();
        if (is_transvection(a * b)) {
          step.eps = eps;
          step.tau = tau;
          step.product_in_class = true;
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) {
      res.failed_at = static_cast<int>(i);
      return res;
    }
    res.steps.push_back(step);
  }
  res.ok = true;
  return res;
}

// The length-5 connecting path between two transvections:
//   t_{u,v}(xi), t_{u,y}(xi v.x), t_{x,y}(1), t_{x,v'}(xi' y.u'), t_{u',v'}(xi')
// where x, y solve y.u = v'.x = y.x = 0. Middle parameters can vanish over
// tiny fields; such positions are emitted as identity and flagged rather
// than silently repaired.
struct TransvectionPath {
  std::vector<GfMatrix> elements;           // always 5
  std::vector<int> collapsed;               // positions holding the identity
  std::optional<XPathCheck> certification;  // only when nothing collapsed
  GfVector x, y;
  bool fully_certified = false;
};

inline TransvectionPath transvection_xpath(const Transvection& t, const Transvection& t2) {
  if (t.p != t2.p || t.n() != t2.n())
    throw PreconditionError("transvection_xpath: shape/field mismatch");
  if (t.n() < 3) throw PreconditionError("transvection_xpath: needs n >= 3");
  const int n = t.n();
  const std::uint32_t p = t.p;
  PrimeField f(p);

  // enumerate GF(p)^n in lexicographic order
  auto next_vec = [&](GfVector& v) {
    for (int i = n - 1; i >= 0; --i) {
      if (++v[i] < p) return true;
      v[i] = 0;
    }
    return false;
  };

  // Deterministic search maximizing non-degeneracy: v.x and y.u' nonzero
  // make the two middle parameters nonzero.
  GfVector best_x, best_y;
  int best_score = -1;
  GfVector x(n, 0);
  while (next_vec(x)) {
    if (dot(f, t2.v, x) != 0) continue;  // v'.x = 0
    GfVector y(n, 0);
    while (next_vec(y)) {
      if (dot(f, y, t.u) != 0) continue;  // y.u = 0
      if (dot(f, y, x) != 0) continue;    // y.x = 0
      int score = (dot(f, t.v, x) != 0 ? 1 : 0) + (dot(f, y, t2.u) != 0 ? 1 : 0);
      if (score > best_score) {
        best_score = score;
        best_x = x;
        best_y = y;
        if (best_score == 2) break;
      }
    }
    if (best_score == 2) break;
  }
  if (best_score < 0)
    throw StructuralError("transvection_xpath: no admissible (x, y) pair exists");

  TransvectionPath path;
  path.x = best_x;
  path.y = best_y;
  std::uint32_t mid1 = f.mul(t.xi, dot(f, t.v, best_x));
  std::uint32_t mid2 = f.mul(t2.xi, dot(f, best_y, t2.u));

  auto put = [&](int idx, std::optional<Transvection> tv) {
    if (tv)
      path.elements.push_back(tv->matrix());
    else {
      path.elements.push_back(GfMatrix::identity(n, p));
      path.collapsed.push_back(idx);
    }
  };
  put(0, t);
  put(1, mid1 ? std::optional(make_transvection(t.u, best_y, mid1, p)) : std::nullopt);
  put(2, make_transvection(best_x, best_y, 1, p));
  put(3, mid2 ? std::optional(make_transvection(best_x, t2.v, mid2, p)) : std::nullopt);
  put(4, t2);

  if (path.collapsed.empty()) {
    path.certification = is_x_path_transvections(path.elements);
    path.fully_certified = path.certification->ok;
  }
  return path;
}

// Checks exactly what the path object claims: flagged positions hold the
// identity, unflagged ones are transvections, and a flag-free path carries a
// passing step certification.
inline bool verify_path_claims(const TransvectionPath& path) {
  if (path.elements.size() != 5) return false;
  for (std::size_t i = 0; i < path.elements.size(); ++i) {
    bool flagged = false;
    for (int c : path.collapsed) flagged = flagged || c == static_cast<int>(i);
    if (flagged) {
      if (!path.elements[i].is_identity()) return false;
    } else if (!is_transvection(path.elements[i])) {
      return false;
    }
  }
  if (path.collapsed.empty()) return path.fully_certified;
  return true;
}

}  // namespace treelab
