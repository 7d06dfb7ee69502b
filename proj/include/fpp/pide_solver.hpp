#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpp/model.hpp"

namespace fpp {

/// n interior nodes x_i = a + i h, i = 1..n, h = (b - a)/(n + 1).
class Grid {
public:
    Grid(Interval interval, std::size_t n);

    std::size_t size() const { return n_; }
    double spacing() const { return h_; }
    Interval interval() const { return interval_; }
    /// Node i in 0..n+1; 0 and n+1 are the endpoints a and b.
    double node(std::size_t i) const { return interval_.a + static_cast<double>(i) * h_; }

private:
    Interval interval_;
    std::size_t n_;
    double h_;
};

/// Row-major dense matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Throws std::runtime_error when a pivot vanishes.
std::vector<double> solve_dense(DenseMatrix A, std::vector<double> b);

/// Discretized integro-differential problem: matrix * v = rhs on the
/// interior nodes, with the outer values folded into rhs.
struct LinearSystem {
    DenseMatrix matrix;
    std::vector<double> rhs;
    /// Rows where the first-derivative term was upwinded.
    std::vector<bool> upwinded;
};

LinearSystem assemble(const ProcessSpec& spec, const Grid& grid);

struct Provenance {
    enum class Kind { PIDE, ClosedForm, MonteCarlo } kind = Kind::PIDE;
    std::size_t grid_n = 0;
    int example_id = 0;
    std::size_t paths = 0;
    double dt = 0.0;

    std::string describe() const;
};

/// pi_a on a grid with piecewise-linear interpolation and the outer values
/// 1 (x <= a) and 0 (x >= b).
class SolutionField {
public:
    SolutionField(Grid grid, std::vector<double> values, Provenance provenance);

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    const Provenance& provenance() const { return provenance_; }

    /// Largest distance of a raw value outside [0, 1] before clamping.
    double raw_excess() const { return raw_excess_; }
    double residual_norm() const { return residual_norm_; }
    double rhs_norm() const { return rhs_norm_; }

    double operator()(double x) const;

    void write_csv(std::ostream& os) const;
    nlohmann::json to_json() const;

private:
    friend SolutionField solve(const ProcessSpec&, std::size_t);

    Grid grid_;
    std::vector<double> values_;
    Provenance provenance_;
    double raw_excess_ = 0.0;
    double residual_norm_ = 0.0;
    double rhs_norm_ = 0.0;
};

/// Monotone discretizations keep values in [-tol, 1 + tol].
inline constexpr double kMaximumPrincipleTolerance = 1e-8;

/// Assembles and solves on n interior nodes (n >= 8).
SolutionField solve(const ProcessSpec& spec, std::size_t n);

struct ConvergenceRow {
    std::size_t n;
    double max_error;       // sup over nodes and cell midpoints of the interpolant
    double max_node_error;  // nodes only
    double observed_order;  // log2(err(prev) / err(this)); NaN on the first row
};

/// Errors of `solve` against `oracle` for each n. The error is measured on
/// the interpolated field (nodes and cell midpoints).
std::vector<ConvergenceRow> convergence_study(const ProcessSpec& spec,
                                              const std::function<double(double)>& oracle,
                                              std::span<const std::size_t> n_list);

}  // namespace fpp
