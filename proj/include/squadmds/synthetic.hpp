#pragma once

#include <cstdint>
#include <string>

#include "squadmds/types.hpp"

namespace squadmds {

/// Deterministic synthetic datasets for benchmarks and self-tests. All of
/// them label their points, all draw exclusively from the given seed.

/// k isotropic Gaussian clusters with unit noise, centers uniform in
/// [-center_range, center_range]^m. Labels "0".."k-1".
Dataset gaussian_blobs(std::size_t n, std::size_t m, std::size_t k,
                       std::uint64_t seed, double center_range = 10.0,
                       double noise = 1.0);

/// Two-level cluster hierarchy: `majors` well-separated macro clusters,
/// each split into `minors` sub-clusters at a smaller separation scale.
/// Labels "maj.min". Points divide as evenly as possible.
Dataset hierarchical_clusters(std::size_t n, std::size_t m, std::size_t majors,
                              std::size_t minors, std::uint64_t seed,
                              double major_scale = 50.0, double minor_scale = 6.0,
                              double noise = 1.0);

/// Classic 3-D swiss roll with uniform axial spread; labels carry the roll
/// parameter (a scalar) for colormap plots.
Dataset swiss_roll(std::size_t n, std::uint64_t seed, double noise = 0.05);

/// Uniform samples in the unit hypercube [0,1]^m.
Dataset hypercube_uniform(std::size_t n, std::size_t m, std::uint64_t seed);

/// Centered Gaussian with a geometrically decaying axis spectrum
/// (std of axis j = decay^j), so a few directions carry most variance.
Dataset anisotropic_gaussian(std::size_t n, std::size_t m, std::uint64_t seed,
                             double decay = 0.8);

/// Named lookup used by the bench subcommand: blobs | hierarchical |
/// swiss-roll | hypercube | anisotropic. Throws Error(bad_config) on an
/// unknown name.
Dataset make_named_dataset(const std::string& name, std::size_t n,
                           std::uint64_t seed);

}  // namespace squadmds
