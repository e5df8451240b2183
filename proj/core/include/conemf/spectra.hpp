#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace conemf::spectra {

/// One eigenvalue of the Friedrichs Laplacian on a spherical cone-surface
/// with S^1 symmetry, labelled by (Fourier index n, radial index k).
struct EigenvalueEntry {
    double lambda = 0.0;
    int multiplicity = 0;
    std::vector<std::pair<int, int>> labels; // (n, k)
};

struct EigenvalueList {
    std::vector<EigenvalueEntry> entries; // ascending in lambda

    double smallest_nonzero() const;
    std::vector<double> flatten() const; // one lambda per label, ascending
};

/// Scalar Friedrichs spectrum of the spherical football with the given cone
/// angle, up to lambda_max: lambda = (|n| gamma + k)(|n| gamma + k + 1) with
/// gamma = 2 pi / angle, n in Z, k >= 0; entries with n != 0 contribute in
/// +/- pairs. Requires angle in (0, 2 pi].
EigenvalueList football_spectrum(double angle, double lambda_max);

/// Boundary mismatch of the two-sided shooting solve for the Legendre-type
/// radial problem -f'' - cot(r) f' + n^2 gamma^2 / sin^2(r) f = lambda f with
/// Friedrichs-regular behaviour r^{|n| gamma} at both poles. Zeros in lambda
/// are eigenvalues.
double legendre_shooting(double gamma, int n, double lambda);

/// Bisect the shooting mismatch on [lo, hi]; requires a sign change.
double shooting_eigenvalue(double gamma, int n, double lo, double hi,
                           double lambda_tol = 1e-10);

/// All mismatch zeros in (0, lambda_max] located by a sign-change scan.
std::vector<double> shooting_scan(double gamma, int n, double lambda_max,
                                  double step = 0.2);

/// Drops lambda = 0 and doubles every remaining multiplicity (exact plus
/// coexact eigenforms of the Hodge Laplacian on 1-forms).
EigenvalueList scalar_to_oneform_spectrum(const EigenvalueList& scalar);

struct SpectralBounds {
    bool weiss_ok = false;       // smallest nonzero eigenvalue >= 2
    bool oneform_gap_ok = false; // derived one-form spectrum inside (1, inf)
};

SpectralBounds check_spectral_bounds(const EigenvalueList& scalar);

/// Plain-text exchange format: one "lambda multiplicity" pair per line,
/// '#' starts a comment.
std::string serialize_spectrum(const EigenvalueList& list);
EigenvalueList parse_spectrum(std::istream& in);

} // namespace conemf::spectra
