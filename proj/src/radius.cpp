#include "robusched/radius.hpp"

#include "robusched/csv.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

namespace robusched::radius {

using boundary::FeasibleSide;

void RadiusSearchParams::validate() const {
    if (!(r_step > 0.0)) throw InvalidParam("r_step must be positive");
    if (!(r_max > r_step)) throw InvalidParam("r_max must exceed r_step");
    if (n_theta < 16) throw InvalidParam("n_theta must be at least 16");
    if (!(tol_on_curve > 0.0) || !(tol_tangent > 0.0))
        throw InvalidParam("tolerances must be positive");
}

namespace {

struct RayState {
    double prev_res = 0.0;
    bool alive = false;
};

struct Candidate {
    bool found = false;
    bool tangent = false;
    double r = 0.0;
    WorkingPoint contact{};
    double theta = 0.0;
    long extra_evals = 0;
};

// Root of the residual along the ray center + t*dir for t in [t_lo, t_hi],
// given a sign change across the interval.
Candidate refine_on_ray(const BoundaryCurve& curve, WorkingPoint center, double cos_t,
                        double sin_t, double t_lo, double f_lo, double t_hi) {
    Candidate cand;
    cand.extra_evals = 0;
    double lo = t_lo, hi = t_hi, flo = f_lo;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double f = curve.residual({center.m + mid * cos_t, center.s + mid * sin_t});
        ++cand.extra_evals;
        if (f == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((f < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = f;
        } else {
            hi = mid;
        }
    }
    cand.found = true;
    cand.r = 0.5 * (lo + hi);
    cand.contact = {center.m + cand.r * cos_t, center.s + cand.r * sin_t};
    return cand;
}

// |sin| of the angle between the radial direction and the curve normal.
// Uses a contact-domain stencil so that contacts beyond the box edge can
// still be certified.
double tangency_gap(const BoundaryCurve& curve, WorkingPoint contact, double cos_t, double sin_t) {
    const double h = 1e-6 * curve.box.diagonal();
    if (!curve.in_contact_domain(contact.m - h, contact.s - h) ||
        !curve.in_contact_domain(contact.m + h, contact.s + h))
        return HUGE_VAL; // cannot certify tangency at the domain edge
    const double dm =
        (curve.value(contact.m + h, contact.s) - curve.value(contact.m - h, contact.s)) / (2 * h);
    const double ds =
        (curve.value(contact.m, contact.s + h) - curve.value(contact.m, contact.s - h)) / (2 * h);
    const double norm = std::hypot(dm, ds);
    if (norm == 0.0) return HUGE_VAL;
    return std::abs(cos_t * (ds / norm) - sin_t * (dm / norm));
}

bool better(const Candidate& a, const Candidate& b) {
    // Prefer tangent-qualified contacts, then smaller radius, then smaller theta.
    if (a.tangent != b.tangent) return a.tangent;
    if (a.r != b.r) return a.r < b.r;
    return a.theta < b.theta;
}

} // namespace

RadiusResult radius_bruteforce(WorkingPoint center, const BoundaryCurve& curve,
                               const RadiusSearchParams& params, Exec exec) {
    params.validate();
    const boundary::Box& box = curve.box;
    if (!box.contains(center.m, center.s))
        throw InfeasibleCenter("center lies outside the search box");
    const BoundaryCurve* curves = &curve;
    if (!boundary::feasible(center, {curves, 1}, params.tol_on_curve))
        throw InfeasibleCenter("center is on the infeasible side of the curve");

    long evals = 1;
    const double center_res = curve.residual(center);
    if (std::abs(center_res) <= params.tol_on_curve) {
        RadiusResult out;
        out.r = 0.0;
        out.contact = center;
        out.theta = 0.0;
        out.evaluations = evals;
        return out;
    }

    const int n = params.n_theta;
    std::vector<double> cos_t(n), sin_t(n);
    for (int i = 0; i < n; ++i) {
        const double th = 2.0 * M_PI * i / n;
        cos_t[i] = std::cos(th);
        sin_t[i] = std::sin(th);
    }
    std::vector<RayState> rays(n);
    for (auto& ray : rays) {
        ray.prev_res = center_res;
        ray.alive = true;
    }

    const boundary::Box& domain = curve.contact_domain();
    const double r_box = domain.max_corner_distance(center.m, center.s);
    std::vector<Candidate> shell(n);

    for (long k = 1;; ++k) {
        const double r1 = k * params.r_step;
        if (r1 > params.r_max)
            throw NoContactWithinRMax("no contact found within r_max");
        if (r1 > r_box + params.r_step) {
            RadiusResult out;
            out.r = r_box;
            out.contact = center;
            out.theta = 0.0;
            out.evaluations = evals;
            out.box_limited = true;
            return out;
        }

        long shell_evals = 0;
        const double t_lo = r1 - params.r_step;

        auto probe = [&](int i) -> long {
            shell[i].found = false;
            if (!rays[i].alive) return 0;
            const double x = center.m + r1 * cos_t[i];
            const double y = center.s + r1 * sin_t[i];
            if (!curve.in_contact_domain(x, y)) {
                // The usable region (domain above the ergodicity floor) is
                // convex, so a ray that left it never re-enters.
                rays[i].alive = false;
                return 0;
            }
            long used = 1;
            const double res = curve.residual({x, y});
            Candidate cand;
            // A residual sign flip along the ray brackets a curve crossing;
            // the circle-tangent contact also flips because the radial
            // direction there is normal to the curve.
            if ((res < 0.0) != (rays[i].prev_res < 0.0) || res == 0.0) {
                cand = refine_on_ray(curve, center, cos_t[i], sin_t[i],
                                     std::max(t_lo, 0.0), rays[i].prev_res, r1);
                used += cand.extra_evals;
            }
            if (cand.found) {
                cand.theta = 2.0 * M_PI * i / n;
                cand.tangent =
                    tangency_gap(curve, cand.contact, cos_t[i], sin_t[i]) <= params.tol_tangent;
                used += 4; // gradient stencil
                shell[i] = cand;
            }
            rays[i].prev_res = res;
            return used;
        };

        if (exec == Exec::Serial) {
            for (int i = 0; i < n; ++i) shell_evals += probe(i);
        } else {
#pragma omp parallel for schedule(static) reduction(+ : shell_evals)
            for (int i = 0; i < n; ++i) shell_evals += probe(i);
        }
        evals += shell_evals;

        const Candidate* best = nullptr;
        for (int i = 0; i < n; ++i)
            if (shell[i].found && (!best || better(shell[i], *best))) best = &shell[i];
        if (best) {
            RadiusResult out;
            out.r = best->r;
            out.contact = best->contact;
            out.theta = best->theta;
            out.evaluations = evals;
            return out;
        }

        bool any_alive = false;
        for (const auto& ray : rays) any_alive |= ray.alive;
        if (!any_alive) {
            RadiusResult out;
            out.r = r_box;
            out.contact = center;
            out.theta = 0.0;
            out.evaluations = evals;
            out.box_limited = true;
            return out;
        }
    }
}

RadiusResult radius_sampled(WorkingPoint center, const Polyline& poly) {
    if (poly.empty()) throw EmptyPolyline();
    RadiusResult out;
    out.method = RadiusMethod::SampledOracle;
    double best2 = HUGE_VAL;
    WorkingPoint best_pt{};
    long evals = 0;

    auto consider = [&](WorkingPoint q) {
        const double d2 = (q.m - center.m) * (q.m - center.m) + (q.s - center.s) * (q.s - center.s);
        ++evals;
        if (d2 < best2) {
            best2 = d2;
            best_pt = q;
        }
    };

    consider(poly.points.front());
    for (std::size_t i = 0; i + 1 < poly.points.size(); ++i) {
        const WorkingPoint& a = poly.points[i];
        const WorkingPoint& b = poly.points[i + 1];
        const double vm = b.m - a.m, vs = b.s - a.s;
        const double len2 = vm * vm + vs * vs;
        double t = 0.0;
        if (len2 > 0.0)
            t = ((center.m - a.m) * vm + (center.s - a.s) * vs) / len2;
        t = std::clamp(t, 0.0, 1.0);
        consider({a.m + t * vm, a.s + t * vs});
    }

    out.r = std::sqrt(best2);
    out.contact = best_pt;
    out.theta = std::atan2(best_pt.s - center.s, best_pt.m - center.m);
    if (out.theta < 0.0) out.theta += 2.0 * M_PI;
    if (out.r == 0.0) out.theta = 0.0;
    out.evaluations = evals;
    return out;
}

std::pair<RadiusResult, RadiusResult> radius_pair(WorkingPoint center,
                                                  const BoundaryCurve& profit_curve,
                                                  const BoundaryCurve& wait_curve,
                                                  const RadiusSearchParams& params, Exec exec) {
    return {radius_bruteforce(center, profit_curve, params, exec),
            radius_bruteforce(center, wait_curve, params, exec)};
}

void write_csv_header(std::ostream& os) {
    os << "center_m,center_s,metric,level,r,contact_m,contact_s,theta,evals,method\n";
}

void write_csv_row(std::ostream& os, WorkingPoint center, const BoundaryCurve& curve,
                   const RadiusResult& res) {
    os << fmt12(center.m) << ',' << fmt12(center.s) << ','
       << (curve.metric == boundary::Metric::Profit ? "profit" : "wait") << ','
       << fmt12(curve.level) << ',' << fmt12(res.r) << ',' << fmt12(res.contact.m) << ','
       << fmt12(res.contact.s) << ',' << fmt12(res.theta) << ',' << res.evaluations << ','
       << (res.method == RadiusMethod::BruteForce ? "BruteForce" : "SampledOracle") << '\n';
}

} // namespace robusched::radius
