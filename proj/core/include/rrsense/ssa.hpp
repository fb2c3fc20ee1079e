#ifndef RRSENSE_SSA_HPP
#define RRSENSE_SSA_HPP

#include <cstddef>
#include <vector>

namespace rrsense {

struct SsaDecomposition {
    // Ordered by decreasing singular value; the last entry is the residual
    // of everything past max_components, so the components always sum back
    // to the input.
    std::vector<std::vector<double>> components;
    std::size_t window_length = 0;
};

// Trajectory-matrix embedding + SVD + diagonal averaging.
SsaDecomposition ssa_decompose(const std::vector<double>& series,
                               std::size_t window_length,
                               std::size_t max_components);

}  // namespace rrsense

#endif
