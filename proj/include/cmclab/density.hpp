#pragma once

#include <cmclab/curvature.hpp>
#include <cmclab/mesh.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace cmclab {

///
/// Exact surface measure of Euclidean balls. Per-triangle frames are built
/// once per mesh; each query clips only the triangles whose bounding spheres
/// straddle the ball boundary and takes the rest from sorted prefix sums.
///
class BallIntegrator {
public:
    explicit BallIntegrator(const SurfaceMesh& mesh);
    ~BallIntegrator();
    BallIntegrator(BallIntegrator&&) noexcept;
    BallIntegrator& operator=(BallIntegrator&&) noexcept;

    /// Area of the surface inside the closed ball.
    double mass(const Eigen::VectorXd& center, double r) const;

    /// sum_T w_T * area(T ∩ B_r(center)).
    double weighted(const Eigen::VectorXd& center, double r, const Eigen::VectorXd& triangle_weights) const;

    /// Clipped area of each triangle.
    Eigen::VectorXd clipped_areas(const Eigen::VectorXd& center, double r) const;

    double total_area() const;
    std::size_t num_triangles() const;

    /// Query object for many radii about one center. Keeps a pointer to the
    /// integrator, which must outlive it.
    class Profile {
    public:
        double operator()(double r) const;

    private:
        friend class BallIntegrator;
        const BallIntegrator* m_owner = nullptr;
        Eigen::VectorXd m_center;
        Eigen::VectorXd m_weights;
        std::vector<int> m_by_inner;      // triangle order by nearest possible distance
        std::vector<double> m_inner;      // sorted lower bounds
        std::vector<double> m_outer;      // per triangle upper bound (unsorted)
        std::vector<double> m_outer_sorted;
        std::vector<double> m_full_prefix; // prefix sums of w*area by outer bound
    };

    Profile profile(const Eigen::VectorXd& center) const;
    Profile profile(const Eigen::VectorXd& center, const Eigen::VectorXd& triangle_weights) const;

private:
    struct Frames;
    std::unique_ptr<Frames> m_frames;
    double clip(std::size_t t, const Eigen::VectorXd& center, double r) const;
};

/// Per-triangle weights w_T = sum_{i in T} rho_i A_i / S_i, where S_i is the
/// area of the triangles around vertex i. With these weights,
/// sum_T w_T area(T ∩ B) distributes each vertex density over its clipped
/// share of incident triangles, and equals sum_i rho_i A_i when B covers all.
Eigen::VectorXd vertex_density_to_triangle_weights(const SurfaceMesh& mesh, const Eigen::VectorXd& vertex_area,
                                                   const Eigen::VectorXd& density);

double ball_mass(const SurfaceMesh& mesh, const Eigen::VectorXd& center, double r);

/// Area outside the closed ball; ball_mass + complement = total area.
double ball_mass_complement(const SurfaceMesh& mesh, const Eigen::VectorXd& center, double r);

/// mass / (pi r^2).
double density_ratio(const SurfaceMesh& mesh, const Eigen::VectorXd& center, double r);

struct DensityProfile
{
    int basepoint = -1;
    std::vector<double> radii;
    std::vector<double> masses;
    std::vector<double> ratios;
};

DensityProfile density_profile(const SurfaceMesh& mesh, int basepoint, const std::vector<double>& radii);

/// `count` radii spaced geometrically from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, int count);

struct RadiusSearch
{
    int grid_points = 64;
    double grid_floor_ratio = 1.0 / 1024.0;
    int bisection_steps = 30;
};

/// Largest a <= r_max such that `ok(r)` for every grid radius up to a, with
/// the first failing grid interval refined by bisection.
double sup_radius(const std::function<bool(double)>& ok, double r_max, const RadiusSearch& search = {});

/// sup{a : Theta(x, r) <= 2(1 - gamma) for all r <= a}, capped at r_max.
double nonconcentration_radius(const SurfaceMesh& mesh, const Eigen::VectorXd& center, double gamma, double r_max,
                               const RadiusSearch& search = {});
double nonconcentration_radius(const BallIntegrator& balls, const Eigen::VectorXd& center, double gamma,
                               double r_max, const RadiusSearch& search = {});

/// sup{r <= sigma : int_{B_r} |A|^2 <= epsilon_tc}.
double total_curvature_radius(const SurfaceMesh& mesh, const CurvaturePacket& packet, const Eigen::VectorXd& center,
                              double epsilon_tc, double sigma, const RadiusSearch& search = {});

/// sigma = gamma / (20 (1 - gamma) + gamma).
double total_curvature_sigma(double gamma);

struct RadiiReport
{
    double gamma = 0.0;
    double r_D = 0.0;
    double epsilon_tc = 0.0;
    double r_eps = 0.0;
    double sigma = 0.0;
};

RadiiReport radii_report(const SurfaceMesh& mesh, const CurvaturePacket& packet, const Eigen::VectorXd& center,
                         double gamma, double epsilon_tc, double r_max);

/// int_{B_r(center)} |H|^2 with the clipped-share vertex weighting.
double ball_willmore(const SurfaceMesh& mesh, const CurvaturePacket& packet, const Eigen::VectorXd& center, double r);

/// C_delta = 3/16 + 1/(4 delta).
double monotonicity_constant(double delta);

struct MonotonicitySample
{
    Eigen::VectorXd center;
    double r = 0.0;
    double a = 0.0;
};

struct MonotonicityEvaluation
{
    std::size_t index = 0;
    double lhs = 0.0; // mu(B_r)/r^2
    double rhs = 0.0; // (1 + delta) mu(B_a)/a^2 + C_delta int_{B_a} |H|^2
    bool violated = false;
};

/// Evaluates every sample. Throws BadSample for r <= 0 or r > a.
std::vector<MonotonicityEvaluation> evaluate_monotonicity(const SurfaceMesh& mesh, const CurvaturePacket& packet,
                                                          const std::vector<MonotonicitySample>& samples,
                                                          double delta, double allowance = 1e-2);

/// The violating evaluations (LHS > RHS (1 + allowance)), by sample index.
std::vector<MonotonicityEvaluation> monotonicity_audit(const SurfaceMesh& mesh, const CurvaturePacket& packet,
                                                       const std::vector<MonotonicitySample>& samples, double delta,
                                                       double allowance = 1e-2);

/// Random centers on the surface (area-uniform) with log-uniform outer radius
/// a in [a_min, a_max] and r = a * u, u log-uniform in [1/100, 1].
std::vector<MonotonicitySample> random_monotonicity_samples(const SurfaceMesh& mesh, std::size_t count,
                                                            std::uint64_t seed, double a_min, double a_max);

struct LemmaConstants
{
    double epsilon_gamma = 0.0; // 8 pi g / (32 pi (1 - g) + 7)
    double a_gamma_w = 0.0;     // 4 pi g / ((32 pi (1 - g) + 7) W)
};

LemmaConstants lemma_constants(double gamma, double W);

/// Deterministic farthest-point sample of vertex indices, starting at vertex 0.
std::vector<int> farthest_point_samples(const SurfaceMesh& mesh, std::size_t count);

/// max over sampled basepoints of int_{B_r(p)} |H|^2.
double local_willmore_profile(const SurfaceMesh& mesh, const CurvaturePacket& packet, double r, int sample_count);

struct LocalWillmoreCheck
{
    bool holds = false;
    double worst_ratio = 0.0; // max LHS / RHS over the sampled (p, r)
    double a = 0.0;           // a(W, gamma)
    double epsilon_gamma = 0.0;
};

/// int_{B_r(p)} |H|^2 <= 2 eps^2 + (16 W^2 / pi) r^2 for r <= a(W, gamma),
/// with a 5% allowance. Throws PreconditionUnmet unless the area is 4 pi
/// (0.5%) and int ||H| - avg|H||^2 <= eps^2 <= epsilon(gamma)^2.
LocalWillmoreCheck local_willmore_bound_check(const SurfaceMesh& mesh, const CurvaturePacket& packet, double epsilon,
                                              double W, double gamma, int sample_count = 64, int radii = 16);

} // namespace cmclab
