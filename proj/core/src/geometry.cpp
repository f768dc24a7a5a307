#include "cdt/geometry.hpp"

#include <algorithm>
#include <cstdint>

#include "cdt/error.hpp"

namespace cdt {

RowEchelon rref(Matrix m) {
    RowEchelon out;
    if (m.empty()) return out;
    const std::size_t cols = m.front().size();
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
        std::size_t p = row;
        while (p < m.size() && sgn(m[p][c]) == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[row], m[p]);
        Rational inv = 1 / m[row][c];
        for (auto& x : m[row]) {
            if (sgn(x) != 0) x *= inv;
        }
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == row || sgn(m[i][c]) == 0) continue;
            Rational f = m[i][c];
            for (std::size_t k = c; k < cols; ++k) {
                if (sgn(m[row][k]) != 0) m[i][k] -= f * m[row][k];
            }
        }
        out.pivots.push_back(c);
        ++row;
    }
    m.resize(row);
    out.rows = std::move(m);
    return out;
}

Matrix null_space(const Matrix& rows, std::size_t dim) {
    RowEchelon r = rref(rows);
    std::vector<bool> is_pivot(dim, false);
    for (auto p : r.pivots) is_pivot[p] = true;
    Matrix basis;
    for (std::size_t j = 0; j < dim; ++j) {
        if (is_pivot[j]) continue;
        Vector v = zeros(dim);
        v[j] = 1;
        for (std::size_t i = 0; i < r.rows.size(); ++i) v[r.pivots[i]] = -r.rows[i][j];
        basis.push_back(std::move(v));
    }
    return basis;
}

namespace {

// Phase 1 on T x = rhs, x >= 0, rhs >= 0, artificial slack per row. Bland's rule throughout.
std::optional<Vector> phase_one(Matrix t, Vector rhs, std::size_t n, const std::stop_token& stop) {
    const std::size_t m = t.size();
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;
    Vector d = zeros(n);
    Rational w = 0;
    for (std::size_t i = 0; i < m; ++i) {
        w += rhs[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (sgn(t[i][j]) != 0) d[j] -= t[i][j];
        }
    }
    while (true) {
        if (stop.stop_requested()) throw Cancelled();
        std::size_t enter = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (sgn(d[j]) < 0) {
                enter = j;
                break;
            }
        }
        if (enter == n) break;
        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (sgn(t[i][enter]) <= 0) continue;
            Rational ratio = rhs[i] / t[i][enter];
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        // Phase 1 is bounded below by zero, so a pivot row always exists.
        Rational inv = 1 / t[leave][enter];
        for (auto& x : t[leave]) {
            if (sgn(x) != 0) x *= inv;
        }
        rhs[leave] *= inv;
        const Vector& pr = t[leave];
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || sgn(t[i][enter]) == 0) continue;
            Rational f = t[i][enter];
            for (std::size_t k = 0; k < n; ++k) {
                if (sgn(pr[k]) != 0) t[i][k] -= f * pr[k];
            }
            rhs[i] -= f * rhs[leave];
        }
        Rational f = d[enter];
        for (std::size_t k = 0; k < n; ++k) {
            if (sgn(pr[k]) != 0) d[k] -= f * pr[k];
        }
        w += f * rhs[leave];
        basis[leave] = enter;
    }
    if (sgn(w) != 0) return std::nullopt;
    Vector x = zeros(n);
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) x[basis[i]] = rhs[i];
    }
    return x;
}

}  // namespace

std::optional<Vector> solve_nonnegative(const Matrix& columns, const Vector& b, std::stop_token stop) {
    const std::size_t n = columns.size();
    const std::size_t m = b.size();
    for (const auto& c : columns) {
        if (c.size() != m) throw InputError("column dimension mismatch in linear system");
    }
    if (n == 0) {
        if (is_zero(b)) return Vector{};
        return std::nullopt;
    }
    Matrix aug(m, Vector(n + 1));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = columns[j][i];
        aug[i][n] = b[i];
    }
    RowEchelon r = rref(std::move(aug));
    if (!r.pivots.empty() && r.pivots.back() == n) return std::nullopt;
    Matrix t;
    Vector rhs;
    t.reserve(r.rows.size());
    for (auto& row : r.rows) {
        Rational v = row[n];
        row.pop_back();
        if (sgn(v) < 0) {
            for (auto& x : row) x = -x;
            v = -v;
        }
        t.push_back(std::move(row));
        rhs.push_back(std::move(v));
    }
    return phase_one(std::move(t), std::move(rhs), n, stop);
}

std::optional<Vector> solve_constraints(const std::vector<Constraint>& constraints, std::size_t nvars,
                                        std::stop_token stop) {
    const std::size_t m = constraints.size();
    std::size_t slacks = 0;
    for (const auto& c : constraints) {
        if (c.a.size() != nvars) throw InputError("constraint dimension mismatch");
        if (c.rel == Constraint::Rel::Ge) ++slacks;
    }
    Matrix columns;
    columns.reserve(2 * nvars + slacks);
    for (std::size_t k = 0; k < nvars; ++k) {
        Vector col(m);
        for (std::size_t i = 0; i < m; ++i) col[i] = constraints[i].a[k];
        columns.push_back(col);
    }
    for (std::size_t k = 0; k < nvars; ++k) columns.push_back(negate(columns[k]));
    for (std::size_t i = 0; i < m; ++i) {
        if (constraints[i].rel != Constraint::Rel::Ge) continue;
        Vector col = zeros(m);
        col[i] = -1;
        columns.push_back(std::move(col));
    }
    Vector b(m);
    for (std::size_t i = 0; i < m; ++i) b[i] = constraints[i].rhs;
    auto x = solve_nonnegative(columns, b, stop);
    if (!x) return std::nullopt;
    Vector u(nvars);
    for (std::size_t k = 0; k < nvars; ++k) u[k] = (*x)[k] - (*x)[nvars + k];
    return u;
}

namespace {

void check_dims(const Vector& d, const ConeModel& cone) {
    if (d.size() != cone.dim) throw InputError("vector dimension does not match cone dimension");
    for (const auto& g : cone.generators) {
        if (g.size() != cone.dim) throw InputError("generator dimension does not match cone dimension");
    }
}

}  // namespace

Membership cone_member(const Vector& d, const ConeModel& cone, std::stop_token stop) {
    check_dims(d, cone);
    if (is_zero(d)) return {true, zeros(cone.generators.size())};
    auto x = solve_nonnegative(cone.generators, d, stop);
    if (!x) return {false, {}};
    return {true, std::move(*x)};
}

Membership cone_member_minimal(const Vector& d, const ConeModel& cone, std::stop_token stop) {
    Membership m = cone_member(d, cone, stop);
    if (!m.member) return m;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < m.coefficients.size(); ++i) {
        if (sgn(m.coefficients[i]) != 0) keep.push_back(i);
    }
    Vector coef;
    for (std::size_t idx = 0; idx < keep.size();) {
        std::vector<std::size_t> trial = keep;
        trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(idx));
        Matrix cols;
        for (auto i : trial) cols.push_back(cone.generators[i]);
        auto x = is_zero(d) ? std::optional<Vector>(zeros(trial.size())) : solve_nonnegative(cols, d, stop);
        if (x) {
            keep = std::move(trial);
        } else {
            ++idx;
        }
    }
    Matrix cols;
    for (auto i : keep) cols.push_back(cone.generators[i]);
    Vector x = is_zero(d) ? zeros(keep.size()) : *solve_nonnegative(cols, d, stop);
    Vector full = zeros(cone.generators.size());
    for (std::size_t k = 0; k < keep.size(); ++k) full[keep[k]] = x[k];
    return {true, std::move(full)};
}

bool in_lineality(const Vector& d, const ConeModel& cone, std::stop_token stop) {
    return cone_member(d, cone, stop).member && cone_member(negate(d), cone, stop).member;
}

namespace {

class Bits {
public:
    explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    Bits operator&(const Bits& o) const {
        Bits r;
        r.words_.resize(words_.size());
        for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] = words_[k] & o.words_[k];
        return r;
    }
    bool contains(const Bits& o) const {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            if ((o.words_[k] & ~words_[k]) != 0) return false;
        }
        return true;
    }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }

private:
    std::vector<std::uint64_t> words_;
};

struct Ray {
    Vector y;
    Bits zero;
};

Vector canonical_sign(Vector v) {
    for (const auto& x : v) {
        if (sgn(x) == 0) continue;
        if (sgn(x) < 0) v = negate(v);
        break;
    }
    return v;
}

// Extreme rays of the pointed cone {y : rows y >= 0}, rank(rows) = r = width.
Matrix pointed_rays(const Matrix& rows, std::size_t r, std::size_t limit, const std::stop_token& stop) {
    const std::size_t m = rows.size();
    std::vector<std::size_t> initial;
    std::vector<bool> used(m, false);
    Matrix chosen;
    for (std::size_t i = 0; i < m && initial.size() < r; ++i) {
        Matrix trial = chosen;
        trial.push_back(rows[i]);
        if (rref(trial).rows.size() == trial.size()) {
            chosen = std::move(trial);
            initial.push_back(i);
            used[i] = true;
        }
    }
    // Columns of chosen^{-1}: solve chosen y = e_k.
    std::vector<Ray> rays;
    for (std::size_t k = 0; k < r; ++k) {
        Matrix aug = chosen;
        for (std::size_t i = 0; i < r; ++i) aug[i].push_back(i == k ? Rational(1) : Rational(0));
        RowEchelon e = rref(std::move(aug));
        Vector y(r);
        for (std::size_t i = 0; i < r; ++i) y[e.pivots[i]] = e.rows[i][r];
        Ray ray{primitive_integer(y), Bits(m)};
        for (std::size_t l = 0; l < r; ++l) {
            if (l != k) ray.zero.set(initial[l]);
        }
        rays.push_back(std::move(ray));
    }
    if (rays.size() > limit) throw LimitExceeded("dual ray count exceeded the limit of " + std::to_string(limit));
    for (std::size_t i = 0; i < m; ++i) {
        if (used[i]) continue;
        if (stop.stop_requested()) throw Cancelled();
        std::vector<Rational> s(rays.size());
        std::vector<std::size_t> plus, minus;
        std::vector<Ray> next;
        for (std::size_t k = 0; k < rays.size(); ++k) {
            s[k] = dot(rows[i], rays[k].y);
            if (sgn(s[k]) > 0) plus.push_back(k);
            if (sgn(s[k]) < 0) minus.push_back(k);
            if (sgn(s[k]) == 0) {
                Ray z = rays[k];
                z.zero.set(i);
                next.push_back(std::move(z));
            }
        }
        for (auto k : plus) next.push_back(rays[k]);
        for (auto p : plus) {
            for (auto q : minus) {
                Bits common = rays[p].zero & rays[q].zero;
                if (r >= 2 && common.count() < r - 2) continue;
                bool adjacent = true;
                for (std::size_t o = 0; o < rays.size() && adjacent; ++o) {
                    if (o != p && o != q && rays[o].zero.contains(common)) adjacent = false;
                }
                if (!adjacent) continue;
                Vector y = s[p] * rays[q].y - s[q] * rays[p].y;
                common.set(i);
                next.push_back({primitive_integer(y), std::move(common)});
                if (next.size() > limit) {
                    throw LimitExceeded("dual ray count exceeded the limit of " + std::to_string(limit));
                }
            }
        }
        rays = std::move(next);
        if (rays.size() > limit) {
            throw LimitExceeded("dual ray count exceeded the limit of " + std::to_string(limit));
        }
    }
    Matrix out;
    out.reserve(rays.size());
    for (auto& ray : rays) out.push_back(std::move(ray.y));
    return out;
}

}  // namespace

Matrix dual_generators(const ConeModel& cone, std::size_t ray_limit, std::stop_token stop) {
    for (const auto& g : cone.generators) {
        if (g.size() != cone.dim) throw InputError("generator dimension does not match cone dimension");
    }
    const std::size_t dim = cone.dim;
    Matrix gens;
    for (const auto& g : cone.generators) {
        if (!is_zero(g)) gens.push_back(primitive_integer(g));
    }
    std::sort(gens.begin(), gens.end(), lex_less);
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());

    Matrix out;
    for (auto& v : null_space(gens, dim)) {
        Vector u = canonical_sign(primitive_integer(v));
        out.push_back(negate(u));
        out.push_back(std::move(u));
    }
    RowEchelon span = rref(gens);
    const std::size_t r = span.rows.size();
    if (r > 0) {
        // Parametrize the span as u = B^T y; constraint g.u >= 0 becomes (B g).y >= 0.
        Matrix m;
        m.reserve(gens.size());
        for (const auto& g : gens) {
            Vector row(r);
            for (std::size_t l = 0; l < r; ++l) row[l] = dot(span.rows[l], g);
            m.push_back(std::move(row));
        }
        for (const auto& y : pointed_rays(m, r, ray_limit, stop)) {
            Vector u = zeros(dim);
            for (std::size_t l = 0; l < r; ++l) {
                if (sgn(y[l]) == 0) continue;
                for (std::size_t k = 0; k < dim; ++k) {
                    if (sgn(span.rows[l][k]) != 0) u[k] += y[l] * span.rows[l][k];
                }
            }
            out.push_back(primitive_integer(u));
        }
    }
    std::sort(out.begin(), out.end(), lex_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool dual_member(const Vector& d, const Matrix& dual) {
    for (const auto& u : dual) {
        if (sgn(dot(u, d)) < 0) return false;
    }
    return true;
}

}  // namespace cdt
