#pragma once

#include <string>
#include <vector>

#include "wvres/eigen_engine.hpp"
#include "wvres/geometry.hpp"
#include "wvres/grid.hpp"
#include "wvres/potential.hpp"
#include "wvres/types.hpp"

namespace wvres {

struct ResonanceRecord {
    cplx z;
    int multiplicity = 0;
    int band = 0;
    double delta = 0.0;
    double residual = 0.0;        // largest eigenvector residual in the cluster
    double curve_distance = 0.0;  // distance to the essential-spectrum curve
    double projector_radius = 0.0;
};

struct ResonanceOptions {
    /// Eigenvalues closer than this to the essential curve are treated as
    /// discretised continuum. Negative selects the default band * dxi.
    double curve_margin = -1.0;
    /// Eigenvalues closer than this are merged into one record.
    double cluster_tol = 1e-6;
    RegionKind region = RegionKind::Omega;
    ProjectorOptions projector;

    double margin_for(int band, const GridSpec& grid) const;
};

struct ResonanceRun {
    cplx theta;
    EigenDecomposition spectrum;
    std::vector<ResonanceRecord> records;
};

/// Discrete eigenvalues of the distorted operator (eps = 0, theta = (-1)^n i delta)
/// inside Omega_{n,delta}, with multiplicities from the Riesz projector.
std::vector<ResonanceRecord> resonances(const PotentialSpec& spec, int n, double delta, const GridSpec& grid,
                                        const ResonanceOptions& options = {});
ResonanceRun resonance_run(const PotentialSpec& spec, int n, double delta, const GridSpec& grid,
                           const ResonanceOptions& options = {});

/// Spectrum of the (possibly distorted) operator with the viscosity term.
EigenDecomposition cap_spectrum(const PotentialSpec& spec, double epsilon, cplx theta, const GridSpec& grid);

/// Grid resolving the lowest CAP eigenfunctions of the undistorted operator,
/// whose Fourier-side width scales as eps^{1/4}: L = max(2, 10 eps^{1/4}) and
/// N = 500 * (10 eps^{1/4} / L) (odd), i.e. N grows like eps^{-1/4} once L
/// reaches its floor.
GridSpec auto_cap_grid(double epsilon);

/// Richardson-extrapolated eigenvalues (4 lambda_{h/2} - lambda_h) / 3 from
/// `grid` and its nested refinement; the `count` smallest-modulus eigenvalues
/// of the refined grid are paired with their nearest coarse counterparts.
struct ExtrapolatedEigenvalue {
    cplx value;
    cplx fine;
    cplx coarse;
};
std::vector<ExtrapolatedEigenvalue> extrapolated_lowest(const PotentialSpec& spec, double epsilon, cplx theta,
                                                        const GridSpec& grid, int count);

/// Default schedule 1e-1 -> 1e-5 with ratio 1/sqrt(10).
std::vector<double> default_schedule();
void validate_schedule(const std::vector<double>& epsilons);

struct TrackPoint {
    int step = 0;
    double epsilon = 0.0;
    cplx lambda;
};

struct Trajectory {
    int id = 0;
    std::vector<TrackPoint> points;
    bool verified = false;  // final point inside Omega'
};

struct Disc {
    cplx center;
    double radius = 0.0;
};

struct DiscCount {
    Disc disc;
    int resonance = -1;              // index into resonances, -1 for user discs
    int expected = 0;                // m_z (sum of enclosed multiplicities)
    std::vector<int> counts;         // eigenvalues of P_eps in the disc, per step
};

struct ResonanceMatch {
    int resonance = -1;
    int trajectory = -1;
    double final_distance = 0.0;
    std::vector<double> distances;   // |lambda(eps_k) - z| along the matched track
    bool monotone_tail = false;      // strictly decreasing over the tail
    int tail_length = 0;
};

struct FlowOptions {
    ResonanceOptions resonance;
    double gate_factor = 3.0;        // gate = factor * last displacement
    double gate_floor_factor = 10.0; // floor = factor * dxi^2
    double initial_gate = 0.1;       // gate for tracks with a single point
    int tail_length = 5;
    std::vector<Disc> discs;         // extra user discs
    bool autoscale_points = false;   // N_k = N_0 (eps_0 / eps_k)^{1/4}
    int max_points = 2001;
};

struct TrajectorySet {
    int band = 0;
    double delta = 0.0;
    std::vector<double> epsilons;
    std::vector<int> grid_points;    // N used at each step
    std::vector<Trajectory> tracks;
    std::vector<ResonanceRecord> resonances;
    std::vector<ResonanceMatch> matches;
    std::vector<DiscCount> discs;
    std::vector<int> window_counts;  // eigenvalues in Omega' away from the curve, per step
    double gate_floor = 0.0;
    std::vector<std::string> warnings;
};

/// Follow the discrete spectrum of the distorted CAP operator along a
/// decreasing eps schedule and compare its limit with resonances().
TrajectorySet flow(const PotentialSpec& spec, int n, double delta, const std::vector<double>& schedule,
                   const GridSpec& grid, const FlowOptions& options = {});

/// Auto-selected counting disc around a resonance: half the distance to the
/// nearest obstruction (other resonances, the essential curve, the straight
/// edges of Omega').
double auto_disc_radius(cplx z, const std::vector<ResonanceRecord>& all, const Region& region);

}  // namespace wvres
