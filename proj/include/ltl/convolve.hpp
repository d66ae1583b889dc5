#pragma once

#include <string>

#include "ltl/grid.hpp"
#include "ltl/kernel.hpp"

namespace ltl {

/// Convolution backend selection.
enum class Backend {
    Naive,       ///< direct window sums in a fixed offset order (reference)
    SummedArea,  ///< prefix-sum window counts; uniform-box kernels only
    Fft,         ///< FFTW-based circular convolution on a zero-padded box
    Auto,        ///< SummedArea when the kernel is a uniform box, else Fft
};

/// Accepts "naive", "sat", "fft", "auto" (InvalidArgumentError otherwise).
Backend parse_backend(const std::string& name);
std::string backend_name(Backend b);

/// Weighted neighborhood average
///     alpha(z) = sum_w k(w) * a(z - w)
/// for every z of the output box (the convolution orientation; all kernels
/// produced by this library are symmetric, for which this coincides with
/// cross-correlation).
///
/// For growable domains the output box is the input box expanded by the
/// kernel radius per axis (reads outside the input count as 0); periodic
/// axes keep the domain box and wrap.  Backends agree to 1e-9 absolute on
/// binary input and are individually bit-deterministic for any thread
/// count.  SummedArea requires a uniform-box kernel (UnsupportedError
/// otherwise).  `threads` <= 0 means all hardware threads.
ScalarField convolve(const BinaryConfig& a, const DiscreteKernel& k,
                     Backend backend = Backend::Auto, int threads = 1);
ScalarField convolve(const ScalarField& f, const DiscreteKernel& k,
                     Backend backend = Backend::Auto, int threads = 1);

/// Sup-norm Lipschitz bound of convolution in terms of the l1 distance of
/// the inputs: lhs = max_z |(k*a)(z) - (k*a')(z)| computed with the naive
/// backend, rhs = (max weight / epsilon^D) * l1_distance(a, a').
struct YoungBoundReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;  ///< lhs <= rhs * (1 + 1e-12)
};

YoungBoundReport young_bound_check(const BinaryConfig& a, const BinaryConfig& b,
                                   const DiscreteKernel& k);

}  // namespace ltl
