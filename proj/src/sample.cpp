#include "ecdflab/sample.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ecdflab/format.hpp"

namespace ecdflab {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw std::domain_error("sample: needs at least one observation");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::domain_error("sample: observations must be finite");
        }
    }
    std::sort(values_.begin(), values_.end());
}

std::vector<double> draw_stream(const Distribution& model, std::int64_t n, const SeedSpec& seed) {
    if (n < 1) {
        throw std::domain_error("draw: n must be >= 1");
    }
    SplitMix64 gen(seed);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (double& v : out) {
        v = model.quantile(gen.next_unit());
    }
    return out;
}

Sample draw_sample(const Distribution& model, std::int64_t n, const SeedSpec& seed) {
    return Sample(draw_stream(model, n, seed));
}

Sample read_sample(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(line, &used);
        } catch (const std::exception&) {
            throw std::domain_error("sample file: bad value at line " + std::to_string(lineno));
        }
        if (used != line.size() || !std::isfinite(v)) {
            throw std::domain_error("sample file: bad value at line " + std::to_string(lineno));
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw std::domain_error("sample file: no values");
    }
    return Sample(std::move(values));
}

Sample read_sample_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::domain_error("sample file: cannot open " + path.string());
    }
    return read_sample(in);
}

void write_sample(const Sample& sample, std::ostream& out) {
    for (double v : sample.values()) {
        out << format_double(v) << '\n';
    }
}

}  // namespace ecdflab
