#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace gmla {

// Unnormalized complex DFT of length data.size(); sign -1 is the forward
// transform sum_n f_n exp(-2 pi i n k / N). Thread safe.
void fftInPlace(std::vector<std::complex<double>>& data, int sign);

// Parallel loop over [0, n) honoring the GMLA_THREADS environment cap.
// Iterations must be independent; results are deterministic.
void parallelFor(int n, const std::function<void(int)>& fn);

int effectiveThreadCount();

}  // namespace gmla
