#ifndef ROBUSCHED_BOUNDARY_HPP
#define ROBUSCHED_BOUNDARY_HPP

#include "robusched/economics.hpp"
#include "robusched/parallel.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace robusched::boundary {

struct Box {
    double m_min, m_max, s_min, s_max;

    bool contains(double m, double s) const {
        return m >= m_min && m <= m_max && s >= s_min && s <= s_max;
    }
    double m_width() const { return m_max - m_min; }
    double s_width() const { return s_max - s_min; }
    double diagonal() const;
    // Largest distance from an interior point to any point of the box;
    // beyond this radius a circle around the point cannot touch the box.
    double max_corner_distance(double m, double s) const;
};

struct WorkingPoint {
    double m;
    double s;
};

enum class Metric { Profit, MeanWait };
enum class FeasibleSide { AboveLevel, BelowLevel };
enum class LevelModel { Closed, Exact };

// Residual tolerance under which a point counts as lying on a curve; the
// feasible region is closed (on-curve points are feasible).
inline constexpr double kOnCurveTol = 1e-6;

// An implicit level set {(m,s) : l(m,s) = level} restricted to a search box,
// together with the side of the level that counts as feasible. Profit
// defaults to AboveLevel (profit >= threshold), MeanWait to BelowLevel.
class BoundaryCurve {
public:
    BoundaryCurve(Metric metric, double level, Box box, double lambda,
                  const economics::EconomicParams& econ, LevelModel model = LevelModel::Closed);

    // Arbitrary level function; used by tests to inject synthetic metrics.
    static BoundaryCurve synthetic(std::function<double(double, double)> fn, double level,
                                   Box box, FeasibleSide side);

    double value(double m, double s) const { return fn_(m, s); }
    double residual(WorkingPoint pt) const { return fn_(pt.m, pt.s) - level; }

    // Where curve contacts may lie: the box opened up by one box height on
    // the infeasible side of the curve. Clipping is asymmetric on purpose:
    // the level set continues past the box on the side where perturbations
    // violate the requirement, and the protective margin is measured to the
    // real boundary there; the feasible-side bound stays closed, which also
    // keeps the profit function's second (congestion) branch below the box
    // out of the search.
    const Box& contact_domain() const { return contact_domain_; }

    // Smallest usable s at a given m (ergodicity floor for the model-backed
    // metrics, the domain edge for synthetic ones).
    double s_floor(double m) const;

    bool in_contact_domain(double m, double s) const {
        return contact_domain_.contains(m, s) && s >= s_floor(m);
    }

    // True when the infeasible side of the curve lies toward larger s.
    bool infeasible_side_is_up() const { return infeasible_up_; }

    Metric metric = Metric::Profit;
    double level = 0.0;
    Box box{};
    FeasibleSide feasible_side = FeasibleSide::AboveLevel;

private:
    BoundaryCurve() = default;
    void derive_contact_domain();

    std::function<double(double, double)> fn_;
    Box contact_domain_{};
    double lambda_r_ = 0.0; // lambda * r_bar for the ergodicity floor; 0 = none
    bool infeasible_up_ = true;
};

struct Polyline {
    std::vector<WorkingPoint> points; // sorted by m
    double max_residual = 0.0;
    int multi_root_columns = 0;

    bool empty() const { return points.empty(); }
};

struct Gradient {
    double dm;
    double ds;
};

// Central-difference gradient; h defaults to 1e-6 * box diagonal. Throws
// StencilOutOfBox when a stencil point leaves the box.
Gradient gradient(const BoundaryCurve& curve, WorkingPoint pt, double h = 0.0);

// Per-column bisection: for each of n_columns values of m across the box,
// finds the root of the residual in s when a sign change exists. Columns
// without a sign change are omitted; an empty polyline is a valid result.
// Columns with several roots keep the one closest to the feasible side and
// are counted in multi_root_columns.
Polyline trace(const BoundaryCurve& curve, int n_columns, Exec exec = Exec::Parallel);

bool feasible(WorkingPoint pt, std::span<const BoundaryCurve> curves,
              double on_curve_tol = kOnCurveTol);

// CSV export: header "m,s,residual", one row per vertex, 12 significant digits.
void write_csv(const Polyline& poly, const BoundaryCurve& curve, std::ostream& os);

} // namespace robusched::boundary

#endif
