// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any criterion fails.
// With -v each property is listed under its criterion.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "alphaflow/verify.hpp"

using namespace alphaflow;

namespace
{

struct Criterion {
    int id;
    const char* title;
    std::function<PropertyList()> run;
};

PropertyList join(PropertyList a, const PropertyList& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

int main(int argc, char** argv)
{
    const bool verbose = argc > 1 && std::strcmp(argv[1], "-v") == 0;
    const std::vector<Criterion> criteria = {
        {1, "geometry laws", [] { return check_geometry_laws(101); }},
        {2, "Gauss-Bonnet", [] { return check_gauss_bonnet(102); }},
        {3, "Jacobian structure", [] { return check_jacobian_structure(103); }},
        {4, "angle-derivative signs and symmetry", [] { return check_angle_derivatives(104); }},
        {5, "potential correctness",
         [] { return join(check_potential_closedness(105), check_hessian_formulas(1105)); }},
        {6, "convexity", [] { return check_convexity(106); }},
        {7, "flow convergence and rate", [] { return check_flow_convergence(107); }},
        {8, "prescribed round trips", [] { return check_prescribed_round_trips(108); }},
        {9, "scaling equivalence", [] { return check_scaling(109); }},
        {10, "long-time envelope", [] { return check_envelope(110); }},
        {11, "curvature evolution identity", [] { return check_curvature_evolution(111); }},
        {12, "normalization obstruction", [] { return check_normalization_obstruction(112); }},
        {13, "monotone Lyapunov descent", [] { return check_lyapunov_descent(113); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        PropertyList props;
        std::string error;
        try {
            props = c.run();
        }
        catch (const std::exception& e) {
            error = e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = error.empty() && all_pass(props);
        failed += pass ? 0 : 1;
        std::printf("criterion %2d %-40s %s  (%zu properties, %.1f s)%s%s\n", c.id, c.title,
                    pass ? "PASS" : "FAIL", props.size(), secs, error.empty() ? "" : "  error: ",
                    error.c_str());
        if (verbose || !pass) {
            for (const auto& p : props) {
                std::printf("    [%s] %s: %.6g %s %.3g over %ld samples\n", p.pass ? "ok" : "FAIL",
                            p.name.c_str(), p.measured, p.relation.c_str(), p.threshold,
                            p.samples);
            }
        }
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed == 0 ? 0 : 1;
}
