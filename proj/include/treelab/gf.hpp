#pragma once

#include "treelab/errors.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace treelab {

inline bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Arithmetic in the prime field GF(p), residues 0..p-1.
struct PrimeField {
  std::uint32_t p;

  explicit PrimeField(std::uint32_t p_) : p(p_) {
    if (!is_prime(p)) throw PreconditionError("field modulus must be prime");
  }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return (a + b) % p; }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return (a + p - b % p) % p; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % p);
  }
  std::uint32_t neg(std::uint32_t a) const { return (p - a % p) % p; }
  std::uint32_t inv(std::uint32_t a) const {
    a %= p;
    if (a == 0) throw PreconditionError("division by zero in GF(p)");
    // Fermat
    std::uint32_t r = 1, base = a, e = p - 2;
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }
};

using GfVector = std::vector<std::uint32_t>;

inline std::uint32_t dot(const PrimeField& f, const GfVector& row, const GfVector& col) {
  if (row.size() != col.size()) throw PreconditionError("dot: size mismatch");
  std::uint32_t s = 0;
  for (std::size_t i = 0; i < row.size(); ++i) s = f.add(s, f.mul(row[i], col[i]));
  return s;
}

inline bool is_zero_vector(const GfVector& v) {
  for (auto x : v)
    if (x) return false;
  return true;
}

// Dense n x n matrix over GF(p), row major.
class GfMatrix {
 public:
  GfMatrix(int n, std::uint32_t p) : n_(n), f_(p), a_(static_cast<std::size_t>(n) * n, 0) {
    if (n <= 0) throw PreconditionError("matrix size must be positive");
  }

  static GfMatrix identity(int n, std::uint32_t p) {
    GfMatrix m(n, p);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  int n() const { return n_; }
  std::uint32_t p() const { return f_.p; }
  const PrimeField& field() const { return f_; }

  std::uint32_t& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  std::uint32_t at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  bool is_identity() const {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (at(i, j) != (i == j ? 1u : 0u)) return false;
    return true;
  }

  GfMatrix operator*(const GfMatrix& o) const {
    check_compat(o);
    GfMatrix r(n_, f_.p);
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < n_; ++k) {
        std::uint32_t aik = at(i, k);
        if (!aik) continue;
        for (int j = 0; j < n_; ++j)
          r.at(i, j) = f_.add(r.at(i, j), f_.mul(aik, o.at(k, j)));
      }
    return r;
  }

  GfMatrix operator+(const GfMatrix& o) const {
    check_compat(o);
    GfMatrix r(n_, f_.p);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r.at(i, j) = f_.add(at(i, j), o.at(i, j));
    return r;
  }

  GfMatrix operator-(const GfMatrix& o) const {
    check_compat(o);
    GfMatrix r(n_, f_.p);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r.at(i, j) = f_.sub(at(i, j), o.at(i, j));
    return r;
  }

  friend bool operator==(const GfMatrix& a, const GfMatrix& b) {
    return a.n_ == b.n_ && a.f_.p == b.f_.p && a.a_ == b.a_;
  }

  std::uint32_t det() const {
    GfMatrix m = *this;
    std::uint32_t d = 1;
    for (int c = 0; c < n_; ++c) {
      int pivot = -1;
      for (int r = c; r < n_; ++r)
        if (m.at(r, c)) {
          pivot = r;
          break;
        }
      if (pivot < 0) return 0;
      if (pivot != c) {
        for (int j = 0; j < n_; ++j) std::swap(m.at(pivot, j), m.at(c, j));
        d = f_.neg(d);
      }
      d = f_.mul(d, m.at(c, c));
      std::uint32_t piv_inv = f_.inv(m.at(c, c));
      for (int r = c + 1; r < n_; ++r) {
        std::uint32_t factor = f_.mul(m.at(r, c), piv_inv);
        if (!factor) continue;
        for (int j = c; j < n_; ++j)
          m.at(r, j) = f_.sub(m.at(r, j), f_.mul(factor, m.at(c, j)));
      }
    }
    return d;
  }

  int rank() const {
    GfMatrix m = *this;
    int rank = 0;
    for (int c = 0; c < n_ && rank < n_; ++c) {
      int pivot = -1;
      for (int r = rank; r < n_; ++r)
        if (m.at(r, c)) {
          pivot = r;
          break;
        }
      if (pivot < 0) continue;
      for (int j = 0; j < n_; ++j) std::swap(m.at(pivot, j), m.at(rank, j));
      std::uint32_t piv_inv = f_.inv(m.at(rank, c));
      for (int r = 0; r < n_; ++r) {
        if (r == rank || !m.at(r, c)) continue;
        std::uint32_t factor = f_.mul(m.at(r, c), piv_inv);
        for (int j = 0; j < n_; ++j)
          m.at(r, j) = f_.sub(m.at(r, j), f_.mul(factor, m.at(rank, j)));
      }
      ++rank;
    }
    return rank;
  }

  GfMatrix inverse() const {
    GfMatrix m = *this;
    GfMatrix inv = identity(n_, f_.p);
    for (int c = 0; c < n_; ++c) {
      int pivot = -1;
      for (int r = c; r < n_; ++r)
        if (m.at(r, c)) {
          pivot = r;
          break;
        }
      if (pivot < 0) throw PreconditionError("matrix not invertible");
      if (pivot != c)
        for (int j = 0; j < n_; ++j) {
          std::swap(m.at(pivot, j), m.at(c, j));
          std::swap(inv.at(pivot, j), inv.at(c, j));
        }
      std::uint32_t piv_inv = f_.inv(m.at(c, c));
      for (int j = 0; j < n_; ++j) {
        m.at(c, j) = f_.mul(m.at(c, j), piv_inv);
        inv.at(c, j) = f_.mul(inv.at(c, j), piv_inv);
      }
      for (int r = 0; r < n_; ++r) {
        if (r == c || !m.at(r, c)) continue;
        std::uint32_t factor = m.at(r, c);
        for (int j = 0; j < n_; ++j) {
          m.at(r, j) = f_.sub(m.at(r, j), f_.mul(factor, m.at(c, j)));
          inv.at(r, j) = f_.sub(inv.at(r, j), f_.mul(factor, inv.at(c, j)));
        }
      }
    }
    return inv;
  }

  // Canonical byte key for hashing and deterministic ordering.
  std::string key() const {
    std::string k;
    k.reserve(a_.size());
    for (auto x : a_) k.push_back(static_cast<char>(x));
    return k;
  }

  // Row-major comma list, as used on the command line.
  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(a_[i]);
    }
    return s;
  }

 private:
  void check_compat(const GfMatrix& o) const {
    if (n_ != o.n_ || f_.p != o.f_.p) throw PreconditionError("matrix shape/field mismatch");
  }

  int n_;
  PrimeField f_;
  std::vector<std::uint32_t> a_;
};

inline GfMatrix parse_matrix(const std::string& csv, int n, std::uint32_t p) {
  GfMatrix m(n, p);
  std::size_t pos = 0;
  for (int i = 0; i < n * n; ++i) {
    std::size_t comma = csv.find(',', pos);
    std::string tok = csv.substr(pos, comma == std::string::npos ? std::string::npos
                                                                 : comma - pos);
    try {
      long v = std::stol(tok);
      m.at(i / n, i % n) = static_cast<std::uint32_t>(((v % p) + p) % p);
    } catch (...) {
      throw StructuralError("bad matrix entry: " + tok);
    }
    if (comma == std::string::npos) {
      if (i != n * n - 1) throw StructuralError("matrix needs " + std::to_string(n * n) + " entries");
      pos = csv.size();
    } else {
      pos = comma + 1;
    }
  }
  if (pos < csv.size()) throw StructuralError("trailing matrix entries");
  return m;
}

}  // namespace treelab
