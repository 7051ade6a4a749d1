#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "ecdflab/distribution.hpp"
#include "ecdflab/rng.hpp"

namespace ecdflab {

// Observations in ascending order. Always nonempty, always finite.
class Sample {
public:
    // Sorts the input. Throws std::domain_error if empty or non-finite.
    explicit Sample(std::vector<double> values);

    const std::vector<double>& values() const noexcept { return values_; }
    std::int64_t size() const noexcept { return static_cast<std::int64_t>(values_.size()); }

private:
    std::vector<double> values_;
};

// n inverse-transform draws in stream order (not sorted). The stream is a
// pure function of the seed, so the first k draws of a longer run equal a
// length-k run bit for bit.
std::vector<double> draw_stream(const Distribution& model, std::int64_t n, const SeedSpec& seed);

// Sorted sample of n inverse-transform draws. n >= 1.
Sample draw_sample(const Distribution& model, std::int64_t n, const SeedSpec& seed);

// Sample file format: one ASCII decimal value per line, newline-terminated.
Sample read_sample(std::istream& in);
Sample read_sample_file(const std::filesystem::path& path);
void write_sample(const Sample& sample, std::ostream& out);

}  // namespace ecdflab
