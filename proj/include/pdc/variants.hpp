#pragma once

#include "pdc/samplers.hpp"

namespace pdc {

/// Partition of n with every part strictly below part_bound (k-core shape).
struct BoundedPartition {
    Partition partition;
    std::uint64_t part_bound = 0;
    void validate() const;
};

/// Block-size multiplicities of a set partition of [n]: Z_i blocks of
/// size i, sum i Z_i = n.
struct SetPartitionShape {
    MultiplicityVector block_sizes;
    std::uint64_t n = 0;
    void validate() const;
};

/// Weight-n instance of the conditioned product-geometric array, weight
/// statistic sum (i+j+1) Z_{i,j}.
struct PlaneArray {
    PlaneGrid grid;
    std::uint64_t n = 0;
    void validate() const;
};

/// Trivial-second-half PDC with A = (Z_2,...,Z_{k-1}) at the bounded tilt
/// and B = Z_1 forced to the residual.
std::pair<BoundedPartition, SampleStats> sample_kcore(std::uint64_t n, std::uint64_t k,
                                                      RngStream& rng,
                                                      const SamplerOptions& opts = {});

/// Shape of a uniform set partition: every Z_i proposed Poisson(x^i/i!)
/// except the trivial coordinate j = max(1, floor(x)); hard-reject unless
/// j divides the residual, soft-accept against the Poisson mode of Z_j.
std::pair<SetPartitionShape, SampleStats> sample_setpartition_shape(std::uint64_t n,
                                                                    RngStream& rng,
                                                                    const SamplerOptions& opts = {});

/// Weight-n array with B = Z_{0,0}: acceptance x^(n - T_A), origin forced.
std::pair<PlaneArray, SampleStats> sample_plane_array(std::uint64_t n, RngStream& rng,
                                                      const SamplerOptions& opts = {});

// Waiting-to-get-lucky baselines over the same ensembles, for measured
// speedups.
std::pair<BoundedPartition, SampleStats> sample_kcore_lucky(std::uint64_t n, std::uint64_t k,
                                                            RngStream& rng);
std::pair<SetPartitionShape, SampleStats> sample_setshape_lucky(std::uint64_t n, RngStream& rng);
std::pair<PlaneArray, SampleStats> sample_plane_lucky(std::uint64_t n, RngStream& rng);

} // namespace pdc
