#pragma once

// Determinantal isosingular deflation: numeric corank, full and reduced
// minor construction, deflation sequences, and partitioning of points into
// jointly certifiable subsets.

#include "rurcert/arith.hpp"
#include "rurcert/multipoly.hpp"
#include "rurcert/numeric.hpp"
#include "rurcert/system.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rurcert {

struct RankAmbiguous : std::runtime_error {
    explicit RankAmbiguous(double ratio)
        : std::runtime_error("singular value gap ratio " + std::to_string(ratio) +
                             " below 1000; refine the point or raise precision"),
          gap_ratio(ratio) {}
    double gap_ratio;
};

struct NoInvertibleBlock : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DeflationMode { Full, Reduced };

struct DeflationIteration {
    unsigned d = 0;                      // dnull entering this iteration
    unsigned long ell = 0;               // full minor count C(n,n-d+1)*C(m,n-d+1)
    unsigned long c = 0;                 // reduced minor count d*(m+d-n)
    std::vector<std::size_t> block_rows; // selected invertible block (reduced mode)
    std::vector<std::size_t> block_cols;
    std::vector<MultiPoly> appended;
};

struct DeflationRecord {
    std::vector<unsigned> sequence;
    std::vector<DeflationIteration> iterations;
    PolySystem final_system;
    enum class Status { Regularized, PositiveIsosingularDimension, IterationCap } status =
        Status::IterationCap;
    // The positive-dimension test is a two-step stabilization heuristic, not
    // the full isosingular-dimension test.
    bool heuristic_stabilization = false;
};

inline unsigned long binomial(unsigned long n, unsigned long k) {
    if (k > n) return 0;
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r.get_ui();
}

// Numeric corank of Jg(z): n minus the count of singular values above
// tol * sigma_max, guarded by a required gap ratio of 1000 between the
// retained and discarded singular values.
inline unsigned dnull(const PolySystem& g, const CVector& z, double tol = 0.0) {
    CMatrix J = eval_jacobian(jacobian(g.polynomials), z);
    const unsigned prec = z.at(0).precision();
    std::vector<BigFloat> sv = singular_values(J);
    const std::size_t n = g.nvars();
    tol = std::max(tol, std::pow(2.0, -static_cast<double>(prec) / 2.0));
    BigFloat sigma_max = sv.front();
    if (sigma_max.is_zero()) return static_cast<unsigned>(n);
    BigFloat cut = BigFloat(tol, prec) * sigma_max;
    std::size_t rank = 0;
    while (rank < sv.size() && sv[rank] > cut) ++rank;
    if (rank > 0 && rank < sv.size() && !sv[rank].is_zero()) {
        double ratio = (sv[rank - 1] / sv[rank]).to_double();
        if (ratio < 1000.0) throw RankAmbiguous(ratio);
    }
    return static_cast<unsigned>(n - rank);
}

// ---------------------------------------------------------------------------
// Symbolic determinants

// Exact division (quotient known to be a polynomial), via leading-term
// reduction in grevlex order.
inline MultiPoly divexact(MultiPoly num, const MultiPoly& den) {
    if (den.is_zero()) throw PolyError("divexact: division by zero");
    auto leading = [](const MultiPoly& p) {
        const std::pair<const Exponents, Rational>* best = nullptr;
        for (const auto& t : p.terms())
            if (!best || grevlex_less(best->first, t.first)) best = &t;
        return best;
    };
    MultiPoly quo(num.nvars());
    const auto* dlt = leading(den);
    while (!num.is_zero()) {
        const auto* nlt = leading(num);
        Exponents e(num.nvars());
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (nlt->first[i] < dlt->first[i]) throw PolyError("divexact: not divisible");
            e[i] = nlt->first[i] - dlt->first[i];
        }
        MultiPoly mono(num.nvars());
        mono.add_term(std::move(e), nlt->second / dlt->second);
        quo = quo + mono;
        num = num - mono * den;
    }
    return quo;
}

// Determinant of a square MultiPoly matrix: cofactor expansion for size <= 4,
// fraction-free (Bareiss) elimination above.
inline MultiPoly sym_det(const std::vector<std::vector<MultiPoly>>& M) {
    const std::size_t k = M.size();
    if (k == 0) throw PolyError("sym_det: empty matrix");
    const std::size_t nv = M[0][0].nvars();
    if (k == 1) return M[0][0];
    if (k <= 4) {
        MultiPoly acc(nv);
        for (std::size_t j = 0; j < k; ++j) {
            if (M[0][j].is_zero()) continue;
            std::vector<std::vector<MultiPoly>> sub;
            for (std::size_t r = 1; r < k; ++r) {
                std::vector<MultiPoly> row;
                for (std::size_t c = 0; c < k; ++c)
                    if (c != j) row.push_back(M[r][c]);
                sub.push_back(std::move(row));
            }
            MultiPoly term = M[0][j] * sym_det(sub);
            acc = j % 2 == 0 ? acc + term : acc - term;
        }
        return acc;
    }
    // Bareiss: entries stay polynomial, divisions are exact.
    std::vector<std::vector<MultiPoly>> A = M;
    MultiPoly prev = MultiPoly::constant(nv, Rational(1));
    int sign = 1;
    for (std::size_t p = 0; p + 1 < k; ++p) {
        if (A[p][p].is_zero()) {
            std::size_t swap_row = p + 1;
            while (swap_row < k && A[swap_row][p].is_zero()) ++swap_row;
            if (swap_row == k) return MultiPoly(nv);  // zero column: det = 0
            std::swap(A[p], A[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = p + 1; i < k; ++i)
            for (std::size_t j = p + 1; j < k; ++j)
                A[i][j] = divexact(A[p][p] * A[i][j] - A[i][p] * A[p][j], prev);
        prev = A[p][p];
    }
    return sign == 1 ? A[k - 1][k - 1] : -A[k - 1][k - 1];
}

// ---------------------------------------------------------------------------
// Minors

// All l = C(n, n-d+1) * C(m, n-d+1) minors of size (n-d+1) of the symbolic
// Jacobian.  Empty when d = max(0, n-m) (smooth point on a d-dimensional
// component).
inline std::vector<MultiPoly> minors_full(const PolySystem& g, unsigned d) {
    const std::size_t n = g.nvars(), m = g.size();
    if (d < 1) throw PolyError("minors_full: d must be >= 1");
    long smooth_d = std::max(0L, static_cast<long>(n) - static_cast<long>(m));
    if (static_cast<long>(d) == smooth_d) return {};
    const std::size_t k = n - d + 1;
    if (k > m || k > n) return {};
    auto J = jacobian(g.polynomials);
    std::vector<MultiPoly> out;
    // Enumerate k-subsets of rows and columns in lexicographic order.
    auto subsets = [](std::size_t total, std::size_t k_) {
        std::vector<std::vector<std::size_t>> all;
        std::vector<std::size_t> cur(k_);
        for (std::size_t i = 0; i < k_; ++i) cur[i] = i;
        while (true) {
            all.push_back(cur);
            std::size_t i = k_;
            while (i-- > 0) {
                if (cur[i] + 1 <= total - (k_ - i)) {
                    ++cur[i];
                    for (std::size_t j = i + 1; j < k_; ++j) cur[j] = cur[j - 1] + 1;
                    break;
                }
                if (i == 0) return all;
            }
        }
    };
    for (const auto& rows : subsets(m, k))
        for (const auto& cols : subsets(n, k)) {
            std::vector<std::vector<MultiPoly>> sub;
            for (std::size_t r : rows) {
                std::vector<MultiPoly> row;
                for (std::size_t c : cols) row.push_back(J[r][c]);
                sub.push_back(std::move(row));
            }
            out.push_back(sym_det(sub));
        }
    return out;
}

// Best-conditioned (n-d) x (n-d) block of Jg(z) by greedy complete pivoting
// on moduli; ties broken by smallest (row, col).
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> select_block(
    const PolySystem& g, const CVector& z, unsigned d) {
    const std::size_t n = g.nvars(), m = g.size();
    const std::size_t k = n - d;
    std::vector<std::size_t> rows, cols;
    if (k == 0) return {rows, cols};
    CMatrix J = eval_jacobian(jacobian(g.polynomials), z);
    const unsigned prec = z.at(0).precision();
    BigFloat scale = mat_max_abs(J);
    BigFloat floor_ = (scale + BigFloat::one(prec)).ldexp(-static_cast<long>(prec) / 2);
    std::vector<bool> row_used(m, false), col_used(n, false);
    for (std::size_t step = 0; step < k; ++step) {
        std::size_t br = m, bc = n;
        BigFloat best = BigFloat::zero(prec);
        for (std::size_t r = 0; r < m; ++r) {
            if (row_used[r]) continue;
            for (std::size_t c = 0; c < n; ++c) {
                if (col_used[c]) continue;
                BigFloat a = J[r][c].abs();
                if (a > best) {
                    best = a;
                    br = r;
                    bc = c;
                }
            }
        }
        if (br == m || !(best > floor_))
            throw NoInvertibleBlock("no well-conditioned invertible block of size " +
                                    std::to_string(k));
        row_used[br] = true;
        col_used[bc] = true;
        rows.push_back(br);
        cols.push_back(bc);
        // Schur update so later pivots reflect conditioning of the block.
        for (std::size_t r = 0; r < m; ++r) {
            if (row_used[r]) continue;
            CFloat f = J[r][bc] / J[br][bc];
            for (std::size_t c = 0; c < n; ++c)
                if (!col_used[c]) J[r][c] -= f * J[br][c];
        }
    }
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    return {rows, cols};
}

// The c = d*(m+d-n) minors of size (n-d+1) containing the selected block:
// block rows plus one extra row, block cols plus one extra column.
inline std::vector<MultiPoly> minors_reduced(const PolySystem& g, const CVector& z, unsigned d,
                                             std::vector<std::size_t>* block_rows = nullptr,
                                             std::vector<std::size_t>* block_cols = nullptr) {
    const std::size_t n = g.nvars(), m = g.size();
    if (d < 1) throw PolyError("minors_reduced: d must be >= 1");
    auto [rows, cols] = select_block(g, z, d);
    if (block_rows) *block_rows = rows;
    if (block_cols) *block_cols = cols;
    auto J = jacobian(g.polynomials);
    std::vector<MultiPoly> out;
    std::vector<bool> row_in(m, false), col_in(n, false);
    for (std::size_t r : rows) row_in[r] = true;
    for (std::size_t c : cols) col_in[c] = true;
    for (std::size_t er = 0; er < m; ++er) {
        if (row_in[er]) continue;
        for (std::size_t ec = 0; ec < n; ++ec) {
            if (col_in[ec]) continue;
            std::vector<std::size_t> rset = rows, cset = cols;
            rset.push_back(er);
            cset.push_back(ec);
            std::sort(rset.begin(), rset.end());
            std::sort(cset.begin(), cset.end());
            std::vector<std::vector<MultiPoly>> sub;
            for (std::size_t r : rset) {
                std::vector<MultiPoly> row;
                for (std::size_t c : cset) row.push_back(J[r][c]);
                sub.push_back(std::move(row));
            }
            out.push_back(sym_det(sub));
        }
    }
    return out;
}

// Iterates the determinantal deflation operator until the corank reaches
// zero, the sequence stabilizes at a positive value (two consecutive equal
// entries with unchanged rank data), or the iteration cap.
inline DeflationRecord deflation_sequence(const PolySystem& g, const CVector& z,
                                          unsigned max_iter = 16,
                                          DeflationMode mode = DeflationMode::Reduced,
                                          double tol = 0.0) {
    DeflationRecord rec;
    PolySystem cur = g;
    unsigned prev_d = 0;
    bool have_prev = false;
    for (unsigned iter = 0; iter <= max_iter; ++iter) {
        unsigned d = dnull(cur, z, tol);
        if (!rec.sequence.empty() && d > rec.sequence.back())
            throw PolyError("deflation: sequence failed to be nonincreasing");
        rec.sequence.push_back(d);
        if (d == 0) {
            rec.status = DeflationRecord::Status::Regularized;
            break;
        }
        if (have_prev && d == prev_d) {
            rec.status = DeflationRecord::Status::PositiveIsosingularDimension;
            rec.heuristic_stabilization = true;
            break;
        }
        const std::size_t n = cur.nvars(), m = cur.size();
        DeflationIteration it;
        it.d = d;
        it.ell = binomial(n, n - d + 1) * binomial(m, n - d + 1);
        it.c = static_cast<unsigned long>(d) *
               static_cast<unsigned long>(m + d - n);
        if (mode == DeflationMode::Full) {
            it.appended = minors_full(cur, d);
        } else {
            it.appended = minors_reduced(cur, z, d, &it.block_rows, &it.block_cols);
        }
        if (it.appended.empty()) {
            // Smooth point on a positive-dimensional component: nothing to
            // append, the sequence is constant from here on.
            rec.status = DeflationRecord::Status::PositiveIsosingularDimension;
            rec.iterations.push_back(std::move(it));
            break;
        }
        for (auto& p : it.appended) cur.polynomials.push_back(p);
        rec.iterations.push_back(std::move(it));
        prev_d = d;
        have_prev = true;
    }
    rec.final_system = std::move(cur);
    return rec;
}

// Grouping key: deflation sequence, per-iteration selected blocks, and the
// submatrix-rank profile.
inline std::string deflation_profile_key(const DeflationRecord& rec) {
    std::string key = "seq:";
    for (unsigned d : rec.sequence) key += std::to_string(d) + ",";
    for (const auto& it : rec.iterations) {
        key += "|b:";
        for (auto r : it.block_rows) key += "r" + std::to_string(r);
        for (auto c : it.block_cols) key += "c" + std::to_string(c);
        key += ";l" + std::to_string(it.ell) + ";c" + std::to_string(it.c);
    }
    return key;
}

inline std::vector<std::vector<std::size_t>> group_indices_by_key(
    const std::vector<std::string>& keys) {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < keys.size(); ++i) groups[keys[i]].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [k, idx] : groups) out.push_back(std::move(idx));
    return out;
}

struct PointGroup {
    std::vector<std::size_t> indices;   // into the input point list
    PolySystem regularized;
    std::vector<unsigned> sequence;
};

// Groups points by deflation profile, pairing each group with a single
// regularizing system cross-checked on every member; members that fail the
// cross-check are split into their own groups.
inline std::vector<PointGroup> partition_points(const PolySystem& g,
                                                const std::vector<CVector>& points,
                                                DeflationMode mode = DeflationMode::Reduced,
                                                double tol = 0.0) {
    std::vector<DeflationRecord> recs;
    std::vector<std::string> keys;
    for (const auto& z : points) {
        recs.push_back(deflation_sequence(g, z, 16, mode, tol));
        keys.push_back(deflation_profile_key(recs.back()));
    }
    std::vector<PointGroup> out;
    for (auto& idx : group_indices_by_key(keys)) {
        std::vector<std::size_t> pending = std::move(idx);
        while (!pending.empty()) {
            const DeflationRecord& lead = recs[pending.front()];
            PointGroup grp;
            grp.regularized = lead.final_system;
            grp.sequence = lead.sequence;
            std::vector<std::size_t> rest;
            for (std::size_t i : pending) {
                bool ok = false;
                try {
                    ok = dnull(grp.regularized, points[i], tol) == 0;
                } catch (const RankAmbiguous&) {
                    ok = false;
                }
                if (ok)
                    grp.indices.push_back(i);
                else
                    rest.push_back(i);
            }
            if (grp.indices.empty()) {
                // Leading point does not even regularize itself; isolate it.
                grp.indices.push_back(pending.front());
                rest.erase(std::find(rest.begin(), rest.end(), pending.front()));
            }
            out.push_back(std::move(grp));
            pending = std::move(rest);
        }
    }
    return out;
}

}  // namespace rurcert
