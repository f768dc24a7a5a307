#pragma once

#include <cstddef>
#include <optional>
#include <stop_token>
#include <vector>

#include "cdt/rational.hpp"

namespace cdt {

using Matrix = std::vector<Vector>;

/// Reduced row echelon form. Returns the nonzero rows and, for each, its pivot column.
struct RowEchelon {
    Matrix rows;
    std::vector<std::size_t> pivots;
};
RowEchelon rref(Matrix m);

/// Canonical basis of {x : m x = 0}, one vector per free column of rref(m).
Matrix null_space(const Matrix& rows, std::size_t dim);

/// One linear constraint a.x (rel) rhs over free variables.
struct Constraint {
    enum class Rel { Eq, Ge };
    Vector a;
    Rel rel;
    Rational rhs;
};

/// Exact feasibility of {x >= 0 : A x = b}, where A is given by its columns.
/// Phase-1 simplex with Bland's rule after removing dependent rows.
/// Returns a basic feasible solution or nullopt. Throws Cancelled if `stop` fires.
std::optional<Vector> solve_nonnegative(const Matrix& columns, const Vector& b, std::stop_token stop = {});

/// Exact feasibility of a system of Eq/Ge constraints over free variables.
std::optional<Vector> solve_constraints(const std::vector<Constraint>& constraints, std::size_t nvars,
                                        std::stop_token stop = {});

/// Finitely generated cone {sum alpha_i g_i : alpha >= 0}.
struct ConeModel {
    std::size_t dim = 0;
    Matrix generators;
    /// Optional cached output of dual_generators.
    std::optional<Matrix> dual;
};

struct Membership {
    bool member = false;
    /// One nonnegative coefficient per generator when member.
    Vector coefficients;
};

/// Decides d in cone by exact LP. Throws InputError on dimension mismatch.
Membership cone_member(const Vector& d, const ConeModel& cone, std::stop_token stop = {});

/// Like cone_member, but the certificate's support is inclusion-minimal: each generator in
/// ascending order is dropped whenever the remaining ones still certify membership.
Membership cone_member_minimal(const Vector& d, const ConeModel& cone, std::stop_token stop = {});

/// d and -d both in the cone.
bool in_lineality(const Vector& d, const ConeModel& cone, std::stop_token stop = {});

inline constexpr std::size_t kDefaultRayLimit = 100000;

/// Generators of the dual cone {u : u.g >= 0 for all g}. The orthogonal complement of the
/// generators' span appears as +/- pairs. Each ray is scaled to coprime integers and the list
/// is sorted lexicographically. Double description over the span; throws LimitExceeded when
/// the intermediate ray count passes `ray_limit`.
Matrix dual_generators(const ConeModel& cone, std::size_t ray_limit = kDefaultRayLimit,
                       std::stop_token stop = {});

/// u.d >= 0 for every dual ray.
bool dual_member(const Vector& d, const Matrix& dual);

}  // namespace cdt
