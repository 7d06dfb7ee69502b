#include "fpp/pide_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace fpp {

Grid::Grid(Interval interval, std::size_t n) : interval_(interval), n_(n) {
    if (n < 8) {
        throw InvalidParameter("grid needs n >= 8 interior nodes (got " + std::to_string(n) + ")");
    }
    h_ = interval.length() / static_cast<double>(n + 1);
}

std::vector<double> solve_dense(DenseMatrix A, std::vector<double> b) {
    const std::size_t n = A.rows();
    if (A.cols() != n || b.size() != n) {
        throw std::invalid_argument("solve_dense: dimension mismatch");
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        double best = std::abs(A(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(A(i, k)) > best) {
                best = std::abs(A(i, k));
                pivot = i;
            }
        }
        if (best == 0.0 || !std::isfinite(best)) {
            throw std::runtime_error("solve_dense: singular system (pivot column " +
                                     std::to_string(k) + ")");
        }
        if (pivot != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(A(k, j), A(pivot, j));
            std::swap(b[k], b[pivot]);
        }
        const double inv = 1.0 / A(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double factor = A(i, k) * inv;
            if (factor == 0.0) continue;
            A(i, k) = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) A(i, j) -= factor * A(k, j);
            b[i] -= factor * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= A(ii, j) * x[j];
        x[ii] = s / A(ii, ii);
    }
    return x;
}

namespace {

class RowBuilder {
public:
    RowBuilder(LinearSystem& sys, std::size_t row, std::size_t n)
        : sys_(sys), row_(row), n_(n) {}

    // Adds coef * V_j where V_0 = 1 and V_{n+1} = 0 are outer values.
    void add(std::size_t j, double coef) {
        if (j == 0) {
            sys_.rhs[row_] -= coef;
        } else if (j <= n_) {
            sys_.matrix(row_, j - 1) += coef;
        }
    }
    void add_constant(double c) { sys_.rhs[row_] -= c; }

private:
    LinearSystem& sys_;
    std::size_t row_;
    std::size_t n_;
};

std::size_t cell_index(const Grid& grid, double y) {
    const double raw = std::floor((y - grid.interval().a) / grid.spacing());
    return static_cast<std::size_t>(std::clamp(raw, 0.0, static_cast<double>(grid.size())));
}

void add_jump_stream(RowBuilder& row, const Grid& grid, const JumpStream& stream, std::size_t i) {
    const Interval I = grid.interval();
    const double h = grid.spacing();
    const double x = grid.node(i);
    const double lambda = stream.rate;
    row.add(i, -lambda);

    const auto [lo, hi] = stream.kernel.jump_range(x);
    if (stream.kernel.is_point_mass()) {
        const double y = x + lo;
        if (y <= I.a) {
            row.add_constant(lambda);
        } else if (y < I.b) {
            const std::size_t j = cell_index(grid, y);
            const double w = (y - grid.node(j)) / h;
            row.add(j, lambda * (1.0 - w));
            row.add(j + 1, lambda * w);
        }
        return;
    }

    const double width = hi - lo;
    if (!(width > 0.0)) {
        row.add(i, lambda);
        return;
    }
    const double y0 = x + lo;
    const double y1 = x + hi;
    const double scale = lambda / width;
    const double left_mass = std::max(0.0, std::min(y1, I.a) - y0);
    row.add_constant(scale * left_mass);

    const double s0 = std::max(y0, I.a);
    const double s1 = std::min(y1, I.b);
    if (!(s1 > s0)) {
        return;
    }
    // Exact integral of the piecewise-linear interpolant, cell by cell.
    for (std::size_t j = cell_index(grid, s0); j <= grid.size(); ++j) {
        const double xl = grid.node(j);
        const double xr = grid.node(j + 1);
        const double p = std::max(s0, xl);
        const double q = std::min(s1, xr);
        if (q > p) {
            const double w_left = ((xr - p) * (xr - p) - (xr - q) * (xr - q)) / (2.0 * h);
            const double w_right = ((q - xl) * (q - xl) - (p - xl) * (p - xl)) / (2.0 * h);
            row.add(j, scale * w_left);
            row.add(j + 1, scale * w_right);
        }
        if (xr >= s1) {
            break;
        }
    }
}

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::vector<double> residual(const LinearSystem& sys, std::span<const double> v) {
    const std::size_t n = sys.rhs.size();
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = sys.matrix.row(i);
        long double s = 0.0L;
        for (std::size_t j = 0; j < n; ++j) s += static_cast<long double>(row[j]) * v[j];
        r[i] = static_cast<double>(static_cast<long double>(sys.rhs[i]) - s);
    }
    return r;
}

}  // namespace

LinearSystem assemble(const ProcessSpec& spec, const Grid& grid) {
    spec.validate();
    const std::size_t n = grid.size();
    const double h = grid.spacing();
    LinearSystem sys{DenseMatrix(n, n), std::vector<double>(n, 0.0), std::vector<bool>(n, false)};

    for (std::size_t i = 1; i <= n; ++i) {
        const double x = grid.node(i);
        const double s2 = spec.diffusion.squared(x);
        const double mu = spec.drift(x);
        if (!std::isfinite(s2) || !std::isfinite(mu)) {
            throw InvalidParameter("non-finite coefficient at node x=" + std::to_string(x));
        }
        RowBuilder row(sys, i - 1, n);

        const double diff = 0.5 * s2 / (h * h);
        row.add(i - 1, diff);
        row.add(i, -2.0 * diff);
        row.add(i + 1, diff);

        const bool central = std::abs(mu) * h <= 2.0 * s2;
        if (central) {
            row.add(i + 1, mu / (2.0 * h));
            row.add(i - 1, -mu / (2.0 * h));
        } else if (mu > 0.0) {
            sys.upwinded[i - 1] = true;
            row.add(i + 1, mu / h);
            row.add(i, -mu / h);
        } else {
            sys.upwinded[i - 1] = true;
            row.add(i, mu / h);
            row.add(i - 1, -mu / h);
        }

        for (const JumpStream* stream : {&spec.up_jumps, &spec.down_jumps}) {
            if (stream->active()) {
                if (!stream->kernel.is_point_mass() && x <= 0.0) {
                    throw InvalidParameter("state-proportional kernel at node x <= 0");
                }
                add_jump_stream(row, grid, *stream, i);
            }
        }
    }
    return sys;
}

// ---------------------------------------------------------------------------

std::string Provenance::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::PIDE: os << "pide(n=" << grid_n << ")"; break;
        case Kind::ClosedForm: os << "closed(example=" << example_id << ")"; break;
        case Kind::MonteCarlo: os << "mc(paths=" << paths << ",dt=" << dt << ")"; break;
    }
    return os.str();
}

SolutionField::SolutionField(Grid grid, std::vector<double> values, Provenance provenance)
    : grid_(grid), values_(std::move(values)), provenance_(provenance) {
    if (values_.size() != grid_.size()) {
        throw std::invalid_argument("SolutionField: value count does not match grid");
    }
    for (double& v : values_) {
        raw_excess_ = std::max({raw_excess_, -v, v - 1.0});
        v = std::clamp(v, 0.0, 1.0);
    }
}

double SolutionField::operator()(double x) const {
    const Interval I = grid_.interval();
    if (x <= I.a) return 1.0;
    if (x >= I.b) return 0.0;
    const double h = grid_.spacing();
    const std::size_t n = grid_.size();
    const std::size_t j = std::min(static_cast<std::size_t>((x - I.a) / h), n);
    const double w = (x - grid_.node(j)) / h;
    const double left = j == 0 ? 1.0 : values_[j - 1];
    const double right = j == n ? 0.0 : values_[j];
    return (1.0 - w) * left + w * right;
}

void SolutionField::write_csv(std::ostream& os) const {
    const auto old = os.precision(17);
    os << "x,value\n";
    for (std::size_t i = 0; i < values_.size(); ++i) {
        os << grid_.node(i + 1) << ',' << values_[i] << '\n';
    }
    os.precision(old);
}

nlohmann::json SolutionField::to_json() const {
    nlohmann::json j;
    j["provenance"] = provenance_.describe();
    j["grid"] = {{"a", grid_.interval().a},
                 {"b", grid_.interval().b},
                 {"n", grid_.size()},
                 {"h", grid_.spacing()}};
    j["outer_values"] = {{"left", 1.0}, {"right", 0.0}};
    j["raw_excess"] = raw_excess_;
    j["residual_norm"] = residual_norm_;
    j["values"] = values_;
    return j;
}

SolutionField solve(const ProcessSpec& spec, std::size_t n) {
    const Grid grid(spec.interval, n);
    const LinearSystem sys = assemble(spec, grid);
    std::vector<double> v = solve_dense(sys.matrix, sys.rhs);

    const double rhs_norm = inf_norm(sys.rhs);
    std::vector<double> r = residual(sys, v);
    if (inf_norm(r) > 1e-10 * rhs_norm) {
        // one step of iterative refinement
        const std::vector<double> dv = solve_dense(sys.matrix, r);
        for (std::size_t i = 0; i < n; ++i) v[i] += dv[i];
        r = residual(sys, v);
    }
    const double res_norm = inf_norm(r);
    if (res_norm > 1e-10 * rhs_norm) {
        throw std::runtime_error("PIDE solve: discrete residual " + std::to_string(res_norm) +
                                 " exceeds 1e-10 * ||rhs||");
    }
    SolutionField field(grid, std::move(v), Provenance{Provenance::Kind::PIDE, n});
    field.residual_norm_ = res_norm;
    field.rhs_norm_ = rhs_norm;
    return field;
}

std::vector<ConvergenceRow> convergence_study(const ProcessSpec& spec,
                                              const std::function<double(double)>& oracle,
                                              std::span<const std::size_t> n_list) {
    std::vector<ConvergenceRow> rows;
    for (std::size_t n : n_list) {
        const SolutionField field = solve(spec, n);
        const Grid& grid = field.grid();
        double node_err = 0.0;
        double err = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            if (i >= 1) {
                const double x = grid.node(i);
                node_err = std::max(node_err, std::abs(field(x) - oracle(x)));
            }
            const double mid = grid.node(i) + 0.5 * grid.spacing();
            err = std::max(err, std::abs(field(mid) - oracle(mid)));
        }
        err = std::max(err, node_err);
        double order = std::numeric_limits<double>::quiet_NaN();
        if (!rows.empty()) {
            const double h_prev = spec.interval.length() / static_cast<double>(rows.back().n + 1);
            order = std::log(rows.back().max_error / err) / std::log(h_prev / grid.spacing());
        }
        rows.push_back({n, err, node_err, order});
    }
    return rows;
}

}  // namespace fpp
