// Copyright 2026 The edp-search Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EDP_GF_HPP
#define EDP_GF_HPP

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

/// Exact linear and symplectic algebra over the prime field Z_p.
///
/// Vectors of Z_p^{2n} are written in split form (a_1..a_n | b_1..b_n). The
/// symplectic form is <x, y> = sum_i b_i c_i - a_i d_i for x = (a|b), y = (c|d).
namespace edp {

using BigInt = boost::multiprecision::cpp_int;

/// Largest supported number of qudits per vector (2 * kMaxQudits coordinates).
inline constexpr int kMaxQudits = 8;

inline int mod_p(long long v, int p) {
    long long r = v % p;
    return static_cast<int>(r < 0 ? r + p : r);
}

inline int inv_mod(int v, int p) {
    v = mod_p(v, p);
    if (v == 0) {
        throw std::domain_error("inv_mod: zero has no inverse");
    }
    // Fermat: v^(p-2).
    long long result = 1, base = v;
    int e = p - 2;
    while (e > 0) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<int>(result);
}

inline bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return true;
}

/// Integer power for table sizes; throws on overflow of 62 bits.
inline std::uint64_t ipow(std::uint64_t base, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > (std::uint64_t{1} << 62) / base) {
            throw std::overflow_error("ipow: value too large");
        }
        r *= base;
    }
    return r;
}

/// Vector of Z_p^{2n} stored inline as residues.
///
/// Ordering (operator<=>) is lexicographic on the coordinate tuple in split
/// order, which is the same as numeric order of index().
class GFVector {
   public:
    GFVector() = default;

    GFVector(int p, int n) : p_(static_cast<std::uint8_t>(p)), n_(static_cast<std::uint8_t>(n)) {
        if (!is_prime(p) || p > 251) {
            throw std::invalid_argument("GFVector: modulus must be a prime below 256");
        }
        if (n < 0 || n > kMaxQudits) {
            throw std::invalid_argument("GFVector: qudit count out of range");
        }
    }

    /// Builds a vector from 2n integers, reduced mod p.
    static GFVector from_coords(int p, std::span<const int> coords) {
        if (coords.size() % 2 != 0) {
            throw std::invalid_argument("GFVector: coordinate count must be even");
        }
        GFVector v(p, static_cast<int>(coords.size() / 2));
        for (std::size_t i = 0; i < coords.size(); ++i) {
            v.c_[i] = static_cast<std::uint8_t>(mod_p(coords[i], p));
        }
        return v;
    }

    static GFVector from_coords(int p, std::initializer_list<int> coords) {
        std::vector<int> tmp(coords);
        return from_coords(p, std::span<const int>(tmp));
    }

    /// Parses "1111|0000" style strings (single-digit residues).
    static GFVector parse(int p, const std::string &text) {
        std::vector<int> a, b;
        bool second = false;
        for (char ch : text) {
            if (ch == '|') {
                second = true;
            } else if (ch >= '0' && ch <= '9') {
                (second ? b : a).push_back(ch - '0');
            } else if (ch != ' ') {
                throw std::invalid_argument("GFVector::parse: unexpected character");
            }
        }
        if (!second || a.size() != b.size()) {
            throw std::invalid_argument("GFVector::parse: expected 'a..a|b..b' with equal halves");
        }
        a.insert(a.end(), b.begin(), b.end());
        return from_coords(p, std::span<const int>(a));
    }

    /// Mixed-radix decode with coordinate 0 as the most significant digit.
    static GFVector from_index(int p, int n, std::uint64_t index) {
        GFVector v(p, n);
        for (int i = 2 * n - 1; i >= 0; --i) {
            v.c_[i] = static_cast<std::uint8_t>(index % p);
            index /= p;
        }
        return v;
    }

    static GFVector unit(int p, int n, int coord) {
        GFVector v(p, n);
        v.set(coord, 1);
        return v;
    }

    int p() const { return p_; }
    int n() const { return n_; }
    int size() const { return 2 * n_; }

    int operator[](int i) const { return c_[i]; }
    int a(int i) const { return c_[i]; }
    int b(int i) const { return c_[n_ + i]; }
    void set(int i, int value) { c_[i] = static_cast<std::uint8_t>(mod_p(value, p_)); }

    std::uint64_t index() const {
        std::uint64_t r = 0;
        for (int i = 0; i < size(); ++i) r = r * p_ + c_[i];
        return r;
    }

    bool is_zero() const {
        for (int i = 0; i < size(); ++i) {
            if (c_[i] != 0) return false;
        }
        return true;
    }

    /// First nonzero coordinate, or -1.
    int leading() const {
        for (int i = 0; i < size(); ++i) {
            if (c_[i] != 0) return i;
        }
        return -1;
    }

    std::vector<int> coords() const { return std::vector<int>(c_.begin(), c_.begin() + size()); }

    GFVector &operator+=(const GFVector &o) {
        check_same(o);
        for (int i = 0; i < size(); ++i) c_[i] = static_cast<std::uint8_t>((c_[i] + o.c_[i]) % p_);
        return *this;
    }
    GFVector &operator-=(const GFVector &o) {
        check_same(o);
        for (int i = 0; i < size(); ++i) c_[i] = static_cast<std::uint8_t>((c_[i] + p_ - o.c_[i]) % p_);
        return *this;
    }
    friend GFVector operator+(GFVector x, const GFVector &y) { return x += y; }
    friend GFVector operator-(GFVector x, const GFVector &y) { return x -= y; }
    GFVector operator-() const { return scaled(-1); }

    GFVector scaled(int s) const {
        GFVector r = *this;
        int sm = mod_p(s, p_);
        for (int i = 0; i < size(); ++i) r.c_[i] = static_cast<std::uint8_t>(c_[i] * sm % p_);
        return r;
    }

    /// Adds s * o in place.
    void axpy(int s, const GFVector &o) {
        check_same(o);
        int sm = mod_p(s, p_);
        for (int i = 0; i < size(); ++i) c_[i] = static_cast<std::uint8_t>((c_[i] + sm * o.c_[i]) % p_);
    }

    bool operator==(const GFVector &o) const = default;
    std::strong_ordering operator<=>(const GFVector &o) const = default;

    /// "(1111|0000)" rendering; residues above 9 are comma separated.
    std::string str() const {
        std::ostringstream out;
        bool wide = p_ > 10;
        out << '(';
        for (int i = 0; i < size(); ++i) {
            if (i == n_) {
                out << '|';
            } else if (wide && i > 0) {
                out << ',';
            }
            out << int(c_[i]);
        }
        out << ')';
        return out.str();
    }

    void check_same(const GFVector &o) const {
        if (o.p_ != p_ || o.n_ != n_) {
            throw std::invalid_argument("GFVector: modulus or dimension mismatch");
        }
    }

   private:
    std::uint8_t p_ = 2;
    std::uint8_t n_ = 0;
    std::array<std::uint8_t, 2 * kMaxQudits> c_{};
};

/// Symplectic inner product sum_i b_i c_i - a_i d_i (mod p).
inline int symplectic_product(const GFVector &x, const GFVector &y) {
    x.check_same(y);
    int p = x.p(), n = x.n();
    int acc = 0;
    for (int i = 0; i < n; ++i) {
        acc += x.b(i) * y.a(i) - x.a(i) * y.b(i);
    }
    return mod_p(acc, p);
}

/// Row-reduces `rows` in place over Z_p into reduced row echelon form.
/// Zero rows are dropped. Returns the pivot column of each surviving row.
inline std::vector<int> row_reduce(std::vector<GFVector> &rows) {
    std::vector<int> pivots;
    if (rows.empty()) return pivots;
    int p = rows[0].p();
    int width = rows[0].size();
    std::size_t r = 0;
    for (int col = 0; col < width && r < rows.size(); ++col) {
        std::size_t sel = r;
        while (sel < rows.size() && rows[sel][col] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        rows[r] = rows[r].scaled(inv_mod(rows[r][col], p));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i != r && rows[i][col] != 0) {
                rows[i].axpy(-rows[i][col], rows[r]);
            }
        }
        pivots.push_back(col);
        ++r;
    }
    rows.resize(r);
    return pivots;
}

/// Linear subspace of Z_p^{2n} held in canonical reduced row echelon form.
/// Equal subspaces have identical basis matrices.
class Subspace {
   public:
    Subspace() = default;

    /// The zero subspace of Z_p^{2n}.
    Subspace(int p, int n) : p_(p), n_(n) {}

    static Subspace span(int p, int n, std::vector<GFVector> vectors) {
        Subspace s(p, n);
        for (const auto &v : vectors) {
            if (v.p() != p || v.n() != n) {
                throw std::invalid_argument("Subspace::span: vector of wrong shape");
            }
        }
        s.pivots_ = row_reduce(vectors);
        s.rows_ = std::move(vectors);
        return s;
    }

    static Subspace full(int p, int n) {
        std::vector<GFVector> basis;
        for (int i = 0; i < 2 * n; ++i) basis.push_back(GFVector::unit(p, n, i));
        return span(p, n, std::move(basis));
    }

    /// Wraps rows already known to be in canonical form.
    static Subspace from_canonical_rows(int p, int n, std::vector<GFVector> rows, std::vector<int> pivots) {
        Subspace s(p, n);
        s.rows_ = std::move(rows);
        s.pivots_ = std::move(pivots);
        return s;
    }

    int p() const { return p_; }
    int n() const { return n_; }
    int ambient_dim() const { return 2 * n_; }
    int dim() const { return static_cast<int>(rows_.size()); }
    const std::vector<GFVector> &basis() const { return rows_; }
    const std::vector<int> &pivots() const { return pivots_; }

    /// Canonical coset representative of v + this: zero in every pivot column.
    /// It is the lexicographically smallest element of the coset.
    GFVector reduce(GFVector v) const {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            int c = v[pivots_[i]];
            if (c != 0) v.axpy(-c, rows_[i]);
        }
        return v;
    }

    bool contains(const GFVector &v) const { return reduce(v).is_zero(); }

    bool contains(const Subspace &other) const {
        return std::all_of(other.rows_.begin(), other.rows_.end(), [&](const GFVector &v) { return contains(v); });
    }

    /// Every element, ordered by the coefficient tuple over basis rows.
    std::vector<GFVector> elements() const {
        std::uint64_t count = ipow(p_, dim());
        std::vector<GFVector> out;
        out.reserve(count);
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            out.push_back(combination(idx));
        }
        return out;
    }

    /// Element with coefficient digits of `idx` (row 0 most significant).
    GFVector combination(std::uint64_t idx) const {
        GFVector v(p_, n_);
        for (int i = dim() - 1; i >= 0; --i) {
            int c = static_cast<int>(idx % p_);
            idx /= p_;
            if (c != 0) v.axpy(c, rows_[i]);
        }
        return v;
    }

    bool operator==(const Subspace &o) const { return p_ == o.p_ && n_ == o.n_ && rows_ == o.rows_; }

    std::string str() const {
        std::string s = "span{";
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (i) s += ", ";
            s += rows_[i].str();
        }
        return s + "}";
    }

   private:
    int p_ = 2;
    int n_ = 0;
    std::vector<GFVector> rows_;
    std::vector<int> pivots_;
};

/// Coefficients of the linear functional y -> <c, y> as a plain dot product.
inline GFVector symplectic_dual(const GFVector &c) {
    GFVector d(c.p(), c.n());
    for (int i = 0; i < c.n(); ++i) {
        d.set(i, c.b(i));
        d.set(c.n() + i, -c.a(i));
    }
    return d;
}

/// Solution set {y : <c_i, y> = rhs_i} of a system of symplectic constraints.
struct AffineSolution {
    GFVector particular;  // lexicographically smallest solution
    Subspace kernel;
};

/// Solves <c_i, y> = rhs_i over Z_p^{2n}. Returns nullopt when inconsistent.
inline std::optional<AffineSolution> solve_symplectic(int p, int n, const std::vector<GFVector> &constraints,
                                                      const std::vector<int> &rhs) {
    if (constraints.size() != rhs.size()) {
        throw std::invalid_argument("solve_symplectic: constraint/rhs size mismatch");
    }
    int width = 2 * n;
    std::size_t m = constraints.size();
    // Augmented matrix rows: dual(c_i) | rhs_i.
    std::vector<std::vector<int>> mat(m, std::vector<int>(width + 1));
    for (std::size_t i = 0; i < m; ++i) {
        GFVector d = symplectic_dual(constraints[i]);
        for (int j = 0; j < width; ++j) mat[i][j] = d[j];
        mat[i][width] = mod_p(rhs[i], p);
    }
    std::vector<int> pivot_cols;
    std::size_t r = 0;
    for (int col = 0; col < width && r < m; ++col) {
        std::size_t sel = r;
        while (sel < m && mat[sel][col] == 0) ++sel;
        if (sel == m) continue;
        std::swap(mat[r], mat[sel]);
        int inv = inv_mod(mat[r][col], p);
        for (auto &x : mat[r]) x = x * inv % p;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || mat[i][col] == 0) continue;
            int f = mat[i][col];
            for (int j = 0; j <= width; ++j) mat[i][j] = mod_p(mat[i][j] - f * mat[r][j], p);
        }
        pivot_cols.push_back(col);
        ++r;
    }
    for (std::size_t i = r; i < m; ++i) {
        if (mat[i][width] != 0) return std::nullopt;
    }
    std::vector<bool> is_pivot(width, false);
    for (int c : pivot_cols) is_pivot[c] = true;

    GFVector particular(p, n);
    for (std::size_t i = 0; i < r; ++i) particular.set(pivot_cols[i], mat[i][width]);

    std::vector<GFVector> kernel_basis;
    for (int free_col = 0; free_col < width; ++free_col) {
        if (is_pivot[free_col]) continue;
        GFVector v(p, n);
        v.set(free_col, 1);
        for (std::size_t i = 0; i < r; ++i) v.set(pivot_cols[i], -mat[i][free_col]);
        kernel_basis.push_back(v);
    }
    Subspace kernel = Subspace::span(p, n, std::move(kernel_basis));
    return AffineSolution{kernel.reduce(particular), std::move(kernel)};
}

/// C^perp = {y : <x, y> = 0 for all x in C}.
inline Subspace orthogonal_complement(const Subspace &c) {
    std::vector<int> zeros(c.dim(), 0);
    auto sol = solve_symplectic(c.p(), c.n(), c.basis(), zeros);
    return sol->kernel;
}

inline bool is_self_orthogonal(const Subspace &c) {
    const auto &rows = c.basis();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            if (symplectic_product(rows[i], rows[j]) != 0) return false;
        }
    }
    // <x, x> = 0 holds identically by antisymmetry.
    return true;
}

/// Hyperbolic basis xi_1..xi_n, eta_1..eta_n of Z_p^{2n}.
struct HyperbolicExtension {
    std::vector<GFVector> xi;
    std::vector<GFVector> eta;

    int n() const { return static_cast<int>(xi.size()); }

    /// Checks <xi_i, eta_j> = delta_ij, <xi_i, xi_j> = 0, <eta_i, eta_j> = 0.
    bool is_valid() const {
        if (xi.size() != eta.size()) return false;
        for (std::size_t i = 0; i < xi.size(); ++i) {
            for (std::size_t j = 0; j < xi.size(); ++j) {
                if (symplectic_product(xi[i], eta[j]) != (i == j ? 1 : 0)) return false;
                if (symplectic_product(xi[i], xi[j]) != 0) return false;
                if (symplectic_product(eta[i], eta[j]) != 0) return false;
            }
        }
        return true;
    }
};

namespace detail {

inline void require_isotropic_independent(int p, int n, const std::vector<GFVector> &vs, const char *what) {
    for (const auto &v : vs) {
        if (v.p() != p || v.n() != n) throw std::invalid_argument(std::string(what) + ": vector of wrong shape");
    }
    if (Subspace::span(p, n, vs).dim() != static_cast<int>(vs.size())) {
        throw std::invalid_argument(std::string(what) + ": vectors are linearly dependent");
    }
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            if (symplectic_product(vs[i], vs[j]) != 0) {
                throw std::invalid_argument(std::string(what) + ": vectors are not symplectically orthogonal");
            }
        }
    }
}

/// Lexicographically smallest y with <c_i, y> = rhs_i.
inline GFVector lexmin_solution(int p, int n, const std::vector<GFVector> &constraints, const std::vector<int> &rhs) {
    auto sol = solve_symplectic(p, n, constraints, rhs);
    if (!sol) throw std::invalid_argument("complete_hyperbolic: inconsistent partner constraints");
    return sol->particular;
}

}  // namespace detail

/// Symplectic Gram-Schmidt completion of independent, pairwise orthogonal
/// xi_1..xi_m (m = n - k) into a full hyperbolic basis.
///
/// Every free choice takes the lexicographically smallest admissible vector,
/// so the output depends only on the inputs and their order.
inline HyperbolicExtension complete_hyperbolic(int p, int n, const std::vector<GFVector> &xi_low) {
    detail::require_isotropic_independent(p, n, xi_low, "complete_hyperbolic");
    const std::size_t m = xi_low.size();
    HyperbolicExtension ext;
    ext.xi = xi_low;

    // Partners for the fixed generators.
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<GFVector> cons;
        std::vector<int> rhs;
        for (std::size_t i = 0; i < m; ++i) {
            cons.push_back(xi_low[i]);
            rhs.push_back(i == j ? 1 : 0);
        }
        for (const auto &e : ext.eta) {
            cons.push_back(e);
            rhs.push_back(0);
        }
        ext.eta.push_back(detail::lexmin_solution(p, n, cons, rhs));
    }

    // Remaining pairs inside the complement of everything chosen so far.
    for (std::size_t j = m; j < static_cast<std::size_t>(n); ++j) {
        std::vector<GFVector> cons;
        for (std::size_t i = 0; i < j; ++i) {
            cons.push_back(ext.xi[i]);
            cons.push_back(ext.eta[i]);
        }
        auto space = solve_symplectic(p, n, cons, std::vector<int>(cons.size(), 0));
        // Smallest nonzero vector of a subspace: its last canonical row.
        GFVector x = space->kernel.basis().back();
        std::vector<int> rhs(cons.size(), 0);
        cons.push_back(x);
        rhs.push_back(1);
        GFVector y = detail::lexmin_solution(p, n, cons, rhs);
        ext.xi.push_back(x);
        ext.eta.push_back(y);
    }
    return ext;
}

/// Completion with prescribed xi_{n-k+1..n} and eta_{n-k+1..n}; only
/// eta_1..eta_{n-k} are chosen (lexicographically smallest partners).
inline HyperbolicExtension complete_hyperbolic(int p, int n, const std::vector<GFVector> &xi_low,
                                               const std::vector<GFVector> &xi_high,
                                               const std::vector<GFVector> &eta_high) {
    if (xi_low.size() + xi_high.size() != static_cast<std::size_t>(n) || xi_high.size() != eta_high.size()) {
        throw std::invalid_argument("complete_hyperbolic: expected n-k low and k high vectors");
    }
    std::vector<GFVector> all_xi = xi_low;
    all_xi.insert(all_xi.end(), xi_high.begin(), xi_high.end());
    detail::require_isotropic_independent(p, n, all_xi, "complete_hyperbolic");

    HyperbolicExtension ext;
    ext.xi = all_xi;
    std::vector<GFVector> eta_low;
    for (std::size_t j = 0; j < xi_low.size(); ++j) {
        std::vector<GFVector> cons;
        std::vector<int> rhs;
        for (std::size_t i = 0; i < all_xi.size(); ++i) {
            cons.push_back(all_xi[i]);
            rhs.push_back(i == j ? 1 : 0);
        }
        for (const auto &e : eta_high) {
            cons.push_back(e);
            rhs.push_back(0);
        }
        for (const auto &e : eta_low) {
            cons.push_back(e);
            rhs.push_back(0);
        }
        eta_low.push_back(detail::lexmin_solution(p, n, cons, rhs));
    }
    ext.eta = eta_low;
    ext.eta.insert(ext.eta.end(), eta_high.begin(), eta_high.end());
    if (!ext.is_valid()) {
        throw std::invalid_argument("complete_hyperbolic: prescribed vectors violate the hyperbolic relations");
    }
    return ext;
}

/// The symplectic space C^perp / C with canonical coset representatives.
class QuotientSpace {
   public:
    QuotientSpace() = default;

    QuotientSpace(Subspace c, Subspace cperp) : c_(std::move(c)), cperp_(std::move(cperp)) {
        if (!cperp_.contains(c_)) {
            throw std::invalid_argument("QuotientSpace: C is not contained in C^perp");
        }
        std::vector<GFVector> reps;
        for (const auto &v : cperp_.basis()) reps.push_back(c_.reduce(v));
        reps_ = Subspace::span(c_.p(), c_.n(), std::move(reps));
    }

    static QuotientSpace of(const Subspace &c) { return QuotientSpace(c, orthogonal_complement(c)); }

    const Subspace &c() const { return c_; }
    const Subspace &cperp() const { return cperp_; }
    /// Subspace of canonical representatives; isomorphic to C^perp / C.
    const Subspace &representatives() const { return reps_; }
    int dim() const { return reps_.dim(); }

    GFVector canonical_rep(const GFVector &x) const {
        if (!cperp_.contains(x)) {
            throw std::invalid_argument("QuotientSpace::canonical_rep: vector not in C^perp");
        }
        return c_.reduce(x);
    }

    /// <x + C, y + C> = <x, y>; independent of the representatives.
    int inner(const GFVector &x, const GFVector &y) const {
        return symplectic_product(canonical_rep(x), canonical_rep(y));
    }

   private:
    Subspace c_;
    Subspace cperp_;
    Subspace reps_;
};

/// Ordered hyperbolic basis x_1..x_k, y_1..y_k of a 2k-dimensional space.
struct HyperbolicBasis {
    std::vector<GFVector> x;
    std::vector<GFVector> y;
};

/// Coordinates and Gram matrix of a nondegenerate symplectic space spanned
/// by `basis`. Vectors are addressed by their coordinate index in Z_p^{dim}.
class SymplecticCoordinates {
   public:
    SymplecticCoordinates(int p, std::vector<GFVector> basis) : p_(p), basis_(std::move(basis)) {
        dim_ = static_cast<int>(basis_.size());
        if (dim_ % 2 != 0) throw std::invalid_argument("SymplecticCoordinates: odd dimension is degenerate");
        count_ = ipow(p_, dim_);
        gram_.assign(dim_ * dim_, 0);
        for (int i = 0; i < dim_; ++i) {
            for (int j = 0; j < dim_; ++j) gram_[i * dim_ + j] = symplectic_product(basis_[i], basis_[j]);
        }
        if (gram_rank() != dim_) throw std::invalid_argument("SymplecticCoordinates: degenerate form");
        digits_.assign(count_ * dim_, 0);
        for (std::uint64_t idx = 0; idx < count_; ++idx) {
            std::uint64_t r = idx;
            for (int i = dim_ - 1; i >= 0; --i) {
                digits_[idx * dim_ + i] = static_cast<int>(r % p_);
                r /= p_;
            }
        }
    }

    int p() const { return p_; }
    int dim() const { return dim_; }
    std::uint64_t count() const { return count_; }
    const std::vector<GFVector> &basis() const { return basis_; }

    int form(std::uint64_t u, std::uint64_t v) const {
        const int *du = &digits_[u * dim_];
        const int *dv = &digits_[v * dim_];
        long long acc = 0;
        for (int i = 0; i < dim_; ++i) {
            if (du[i] == 0) continue;
            for (int j = 0; j < dim_; ++j) acc += du[i] * gram_[i * dim_ + j] * dv[j];
        }
        return mod_p(acc, p_);
    }

    GFVector vector(std::uint64_t idx) const {
        GFVector v(basis_[0].p(), basis_[0].n());
        for (int i = 0; i < dim_; ++i) {
            int c = digits_[idx * dim_ + i];
            if (c) v.axpy(c, basis_[i]);
        }
        return v;
    }

   private:
    int gram_rank() const {
        std::vector<std::vector<int>> m(dim_, std::vector<int>(dim_));
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) m[i][j] = gram_[i * dim_ + j];
        int rank = 0;
        for (int col = 0; col < dim_ && rank < dim_; ++col) {
            int sel = rank;
            while (sel < dim_ && m[sel][col] == 0) ++sel;
            if (sel == dim_) continue;
            std::swap(m[rank], m[sel]);
            int inv = inv_mod(m[rank][col], p_);
            for (int i = 0; i < dim_; ++i) {
                if (i == rank || m[i][col] == 0) continue;
                int f = m[i][col] * inv % p_;
                for (int j = 0; j < dim_; ++j) m[i][j] = mod_p(m[i][j] - f * m[rank][j], p_);
            }
            ++rank;
        }
        return rank;
    }

    int p_;
    int dim_;
    std::uint64_t count_;
    std::vector<GFVector> basis_;
    std::vector<int> gram_;
    std::vector<int> digits_;
};

/// Visits every ordered hyperbolic basis as coordinate indices
/// (x_1..x_k, y_1..y_k), in depth-first order over increasing indices.
/// The visitor returns false to stop early.
inline void for_each_hyperbolic_basis_coords(const SymplecticCoordinates &space,
                                             const std::function<bool(std::span<const std::uint64_t> xs,
                                                                      std::span<const std::uint64_t> ys)> &visit) {
    const int k = space.dim() / 2;
    std::vector<std::uint64_t> xs(k), ys(k);
    std::vector<std::uint64_t> all(space.count());
    for (std::uint64_t i = 0; i < space.count(); ++i) all[i] = i;
    bool stop = false;
    std::function<void(int, const std::vector<std::uint64_t> &)> rec = [&](int level,
                                                                          const std::vector<std::uint64_t> &avail) {
        if (stop) return;
        if (level == k) {
            if (!visit(xs, ys)) stop = true;
            return;
        }
        for (std::uint64_t x : avail) {
            if (x == 0) continue;
            for (std::uint64_t y : avail) {
                if (space.form(x, y) != 1) continue;
                xs[level] = x;
                ys[level] = y;
                std::vector<std::uint64_t> next;
                for (std::uint64_t z : avail) {
                    if (space.form(x, z) == 0 && space.form(y, z) == 0) next.push_back(z);
                }
                rec(level + 1, next);
                if (stop) return;
            }
        }
    };
    rec(0, all);
}

/// Visits every ordered hyperbolic basis of the nondegenerate space spanned
/// by `basis`. Total count equals sp_order(dim/2, p).
inline void enumerate_hyperbolic_bases(int p, const std::vector<GFVector> &basis,
                                       const std::function<bool(const HyperbolicBasis &)> &visit) {
    if (basis.empty()) {
        visit(HyperbolicBasis{});
        return;
    }
    SymplecticCoordinates space(p, basis);
    for_each_hyperbolic_basis_coords(space, [&](auto xs, auto ys) {
        HyperbolicBasis hb;
        for (auto x : xs) hb.x.push_back(space.vector(x));
        for (auto y : ys) hb.y.push_back(space.vector(y));
        return visit(hb);
    });
}

inline void enumerate_hyperbolic_bases(const QuotientSpace &q, const std::function<bool(const HyperbolicBasis &)> &visit) {
    enumerate_hyperbolic_bases(q.c().p(), q.representatives().basis(), visit);
}

/// Visits every (n-k)-dimensional self-orthogonal subspace of Z_p^{2n}
/// exactly once. Order: pivot column sets lexicographically, then the free
/// entries of each row in increasing mixed-radix order, row by row.
/// The visitor returns false to stop early.
inline void enumerate_self_orthogonal(int n, int k, int p, const std::function<bool(const Subspace &)> &visit) {
    const int d = n - k;
    if (d < 0 || d > n) throw std::invalid_argument("enumerate_self_orthogonal: need 0 <= n-k <= n");
    if (!is_prime(p)) throw std::invalid_argument("enumerate_self_orthogonal: p must be prime");
    const int width = 2 * n;
    if (d == 0) {
        visit(Subspace(p, n));
        return;
    }
    std::vector<int> pivots(d);
    std::vector<GFVector> rows(d, GFVector(p, n));
    bool stop = false;

    // Fill row `r` over its free positions, then recurse.
    std::function<void(int)> fill = [&](int r) {
        if (stop) return;
        if (r == d) {
            if (!visit(Subspace::from_canonical_rows(p, n, rows, pivots))) stop = true;
            return;
        }
        std::vector<int> free;
        for (int col = pivots[r] + 1; col < width; ++col) {
            if (std::find(pivots.begin(), pivots.end(), col) == pivots.end()) free.push_back(col);
        }
        std::uint64_t combos = ipow(p, static_cast<int>(free.size()));
        for (std::uint64_t idx = 0; idx < combos && !stop; ++idx) {
            GFVector row(p, n);
            row.set(pivots[r], 1);
            std::uint64_t rem = idx;
            for (int f = static_cast<int>(free.size()) - 1; f >= 0; --f) {
                row.set(free[f], static_cast<int>(rem % p));
                rem /= p;
            }
            bool ok = true;
            for (int prev = 0; prev < r && ok; ++prev) ok = symplectic_product(rows[prev], row) == 0;
            if (!ok) continue;
            rows[r] = row;
            fill(r + 1);
        }
    };

    std::function<void(int, int)> choose = [&](int slot, int start) {
        if (stop) return;
        if (slot == d) {
            fill(0);
            return;
        }
        for (int col = start; col <= width - (d - slot); ++col) {
            pivots[slot] = col;
            choose(slot + 1, col + 1);
        }
    };
    choose(0, 0);
}

inline std::vector<Subspace> collect_self_orthogonal(int n, int k, int p) {
    std::vector<Subspace> out;
    enumerate_self_orthogonal(n, k, p, [&](const Subspace &s) {
        out.push_back(s);
        return true;
    });
    return out;
}

inline BigInt big_pow(int base, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

/// |Sp_{2m}(Z_p)| = p^{m^2} prod_{i=1}^{m} (p^{2i} - 1); 1 for m = 0.
inline BigInt sp_order(int m, int p) {
    if (m < 0) throw std::invalid_argument("sp_order: m must be nonnegative");
    BigInt r = big_pow(p, m * m);
    for (int i = 1; i <= m; ++i) r *= big_pow(p, 2 * i) - 1;
    return r;
}

/// Number of (n-k)-dimensional self-orthogonal subspaces of Z_p^{2n}:
/// prod_{i=0}^{n-k-1} (p^{2n-i} - p^i) / (p^{n-k} - p^i).
inline BigInt selforth_count(int n, int k, int p) {
    const int d = n - k;
    if (d < 0 || d > n) throw std::invalid_argument("selforth_count: need 0 <= n-k <= n");
    BigInt num = 1, den = 1;
    for (int i = 0; i < d; ++i) {
        num *= big_pow(p, 2 * n - i) - big_pow(p, i);
        den *= big_pow(p, d) - big_pow(p, i);
    }
    return num / den;
}

/// p^{n^2-k^2} prod_{i=1}^{n-k} (p^i - 1): ratio of all hyperbolic bases of
/// Z_p^{2n} to (stabilizer, encoding class) candidates.
inline BigInt reduction_factor(int n, int k, int p) {
    BigInt r = big_pow(p, n * n - k * k);
    for (int i = 1; i <= n - k; ++i) r *= big_pow(p, i) - 1;
    return r;
}

}  // namespace edp

#endif  // EDP_GF_HPP
