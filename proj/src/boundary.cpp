#include "robusched/boundary.hpp"

#include "robusched/csv.hpp"

#include <cmath>
#include <ostream>

namespace robusched::boundary {

double Box::diagonal() const {
    return std::hypot(m_width(), s_width());
}

double Box::max_corner_distance(double m, double s) const {
    const double dm = std::max(m - m_min, m_max - m);
    const double ds = std::max(s - s_min, s_max - s);
    return std::hypot(dm, ds);
}

BoundaryCurve::BoundaryCurve(Metric metric_, double level_, Box box_, double lambda,
                             const economics::EconomicParams& econ, LevelModel model) {
    metric = metric_;
    level = level_;
    box = box_;
    feasible_side = metric_ == Metric::Profit ? FeasibleSide::AboveLevel : FeasibleSide::BelowLevel;
    if (!(box.m_min < box.m_max) || !(box.s_min < box.s_max))
        throw InvalidParam("search box is degenerate");
    if (!(box.m_min * box.s_min > lambda))
        throw NonErgodic("search box must be entirely ergodic (m_min * s_min > lambda)");
    if (metric_ == Metric::Profit) {
        if (model == LevelModel::Closed) {
            fn_ = [lambda, econ](double m, double s) {
                return economics::profit_closed(m, s, lambda, econ);
            };
        } else {
            fn_ = [lambda, econ](double m, double s) {
                return economics::profit_exact(queueing::QueueParams(m, s, lambda), econ).profit;
            };
        }
    } else {
        if (model == LevelModel::Closed) {
            fn_ = [lambda](double m, double s) {
                return queueing::mean_wait_approx(m, s, lambda);
            };
        } else {
            fn_ = [lambda](double m, double s) {
                return queueing::mean_wait_exact(queueing::QueueParams(m, s, lambda));
            };
        }
    }
    lambda_r_ = lambda; // closed forms fix r_bar = 1
    derive_contact_domain();
}

BoundaryCurve BoundaryCurve::synthetic(std::function<double(double, double)> fn, double level_,
                                       Box box_, FeasibleSide side) {
    BoundaryCurve c;
    c.metric = side == FeasibleSide::AboveLevel ? Metric::Profit : Metric::MeanWait;
    c.level = level_;
    c.box = box_;
    c.feasible_side = side;
    c.fn_ = std::move(fn);
    c.derive_contact_domain();
    return c;
}

void BoundaryCurve::derive_contact_domain() {
    contact_domain_ = box;
    // Which s-direction leaves the feasible side: probe the metric's slope
    // at the box center.
    const double mc = 0.5 * (box.m_min + box.m_max);
    const double sc = 0.5 * (box.s_min + box.s_max);
    const double h = 1e-5 * box.s_width();
    const double slope = fn_(mc, sc + h) - fn_(mc, sc - h);
    const bool value_grows_up = slope > 0.0;
    infeasible_up_ = feasible_side == FeasibleSide::AboveLevel ? !value_grows_up : value_grows_up;
    if (infeasible_up_)
        contact_domain_.s_max += box.s_width();
    else
        contact_domain_.s_min -= box.s_width();
}

double BoundaryCurve::s_floor(double m) const {
    double lo = contact_domain_.s_min;
    if (lambda_r_ > 0.0) lo = std::max(lo, lambda_r_ / m * (1.0 + 1e-6));
    return lo;
}

Gradient gradient(const BoundaryCurve& curve, WorkingPoint pt, double h) {
    if (h == 0.0) h = 1e-6 * curve.box.diagonal();
    const double ah = std::abs(h);
    const Box& b = curve.box;
    if (!b.contains(pt.m - ah, pt.s - ah) || !b.contains(pt.m + ah, pt.s + ah))
        throw StencilOutOfBox("gradient stencil leaves the search box");
    const double dm = (curve.value(pt.m + h, pt.s) - curve.value(pt.m - h, pt.s)) / (2.0 * h);
    const double ds = (curve.value(pt.m, pt.s + h) - curve.value(pt.m, pt.s - h)) / (2.0 * h);
    return Gradient{dm, ds};
}

namespace {

struct ColumnRoot {
    bool found = false;
    double s = 0.0;
    double residual = 0.0;
    bool multi = false;
};

double bisect(const BoundaryCurve& curve, double m, double lo, double hi, double f_lo) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double f_mid = curve.value(m, mid) - curve.level;
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

ColumnRoot solve_column(const BoundaryCurve& curve, double m) {
    constexpr int kScan = 64;
    ColumnRoot out;
    const double lo = curve.s_floor(m);
    const double hi = curve.contact_domain().s_max;
    if (!(lo < hi)) return out;
    double prev_s = lo;
    double prev_f = curve.value(m, prev_s) - curve.level;
    std::vector<double> roots;
    for (int i = 1; i <= kScan; ++i) {
        const double s = lo + (hi - lo) * i / kScan;
        const double f = curve.value(m, s) - curve.level;
        if (prev_f == 0.0) {
            roots.push_back(prev_s);
        } else if ((f < 0.0) != (prev_f < 0.0)) {
            roots.push_back(bisect(curve, m, prev_s, s, prev_f));
        }
        prev_s = s;
        prev_f = f;
    }
    if (prev_f == 0.0) roots.push_back(prev_s);
    if (roots.empty()) return out;
    out.found = true;
    out.multi = roots.size() > 1;
    // keep the root adjacent to the feasible end of the column
    out.s = curve.infeasible_side_is_up() ? roots.front() : roots.back();
    out.residual = curve.value(m, out.s) - curve.level;
    return out;
}

} // namespace

Polyline trace(const BoundaryCurve& curve, int n_columns, Exec exec) {
    if (n_columns < 2) throw InvalidParam("trace needs at least 2 columns");
    const Box& b = curve.box;
    std::vector<ColumnRoot> cols(n_columns);

    if (exec == Exec::Serial) {
        for (int j = 0; j < n_columns; ++j) {
            const double m = b.m_min + b.m_width() * j / (n_columns - 1);
            cols[j] = solve_column(curve, m);
        }
    } else {
#pragma omp parallel for schedule(dynamic, 16)
        for (int j = 0; j < n_columns; ++j) {
            const double m = b.m_min + b.m_width() * j / (n_columns - 1);
            cols[j] = solve_column(curve, m);
        }
    }

    Polyline poly;
    for (int j = 0; j < n_columns; ++j) {
        if (!cols[j].found) continue;
        const double m = b.m_min + b.m_width() * j / (n_columns - 1);
        poly.points.push_back(WorkingPoint{m, cols[j].s});
        poly.max_residual = std::max(poly.max_residual, std::abs(cols[j].residual));
        if (cols[j].multi) ++poly.multi_root_columns;
    }
    return poly;
}

bool feasible(WorkingPoint pt, std::span<const BoundaryCurve> curves, double on_curve_tol) {
    for (const BoundaryCurve& c : curves) {
        const double res = c.residual(pt);
        if (c.feasible_side == FeasibleSide::AboveLevel) {
            if (res < -on_curve_tol) return false;
        } else {
            if (res > on_curve_tol) return false;
        }
    }
    return true;
}

void write_csv(const Polyline& poly, const BoundaryCurve& curve, std::ostream& os) {
    os << "m,s,residual\n";
    for (const WorkingPoint& p : poly.points)
        os << fmt12(p.m) << ',' << fmt12(p.s) << ',' << fmt12(curve.residual(p)) << '\n';
}

} // namespace robusched::boundary
