#ifndef ROBUSCHED_RADIUS_HPP
#define ROBUSCHED_RADIUS_HPP

#include "robusched/boundary.hpp"

#include <cstdint>
#include <iosfwd>
#include <utility>

namespace robusched::radius {

using boundary::BoundaryCurve;
using boundary::Polyline;
using boundary::WorkingPoint;

struct RadiusSearchParams {
    double r_step = 1e-4;      // radius increment zeta
    double r_max = 1e4;        // hard search cap
    int n_theta = 3600;        // polar-angle grid size
    double tol_on_curve = 1e-3;  // residual tolerance at the contact, metric units
    double tol_tangent = 1e-2;   // |sin| of the angle between radial direction and curve normal

    void validate() const;
};

enum class RadiusMethod { BruteForce, SampledOracle };

struct RadiusResult {
    double r = 0.0;
    WorkingPoint contact{};
    double theta = 0.0;
    long evaluations = 0;
    RadiusMethod method = RadiusMethod::BruteForce;
    // Set when the search circle outgrew the box before touching the curve;
    // r is then the distance beyond which no in-box contact can exist.
    bool box_limited = false;
};

// Growing-circle polar search for the shortest distance from a feasible
// center to the curve. Shells of radius k*r_step are scanned over the theta
// grid; a contact is a residual sign change along a ray (refined by
// bisection) that lies inside the box. Tangency (radial direction parallel
// to the curve normal within tol_tangent) is preferred; a residual-only
// contact in the same shell is accepted when no tangent contact exists.
RadiusResult radius_bruteforce(WorkingPoint center, const BoundaryCurve& curve,
                               const RadiusSearchParams& params = {},
                               Exec exec = Exec::Parallel);

// Independent oracle: minimum distance from the center to a traced
// polyline, with projection onto each segment.
RadiusResult radius_sampled(WorkingPoint center, const Polyline& poly);

// Both radii for a jointly feasible center (profit curve first).
std::pair<RadiusResult, RadiusResult> radius_pair(WorkingPoint center,
                                                  const BoundaryCurve& profit_curve,
                                                  const BoundaryCurve& wait_curve,
                                                  const RadiusSearchParams& params = {},
                                                  Exec exec = Exec::Parallel);

// CSV row: center_m,center_s,metric,level,r,contact_m,contact_s,theta,evals,method
void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, WorkingPoint center, const BoundaryCurve& curve,
                   const RadiusResult& res);

} // namespace robusched::radius

#endif
