#include "ecdflab/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ecdflab/format.hpp"

namespace ecdflab {

namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw std::domain_error(std::string(what) + " must be finite");
    }
}

}  // namespace

Distribution Distribution::uniform(double lo, double hi) {
    require_finite(lo, "uniform: lo");
    require_finite(hi, "uniform: hi");
    if (!(lo < hi)) {
        throw std::domain_error("uniform: requires lo < hi");
    }
    return Distribution(UniformLaw{lo, hi});
}

Distribution Distribution::exponential(double rate) {
    require_finite(rate, "exp: rate");
    if (!(rate > 0.0)) {
        throw std::domain_error("exp: rate must be > 0");
    }
    return Distribution(ExponentialLaw{rate});
}

Distribution Distribution::pareto(double scale, double shape) {
    require_finite(scale, "pareto: xm");
    require_finite(shape, "pareto: alpha");
    if (!(scale > 0.0)) {
        throw std::domain_error("pareto: xm must be > 0");
    }
    if (!(shape > 0.0)) {
        throw std::domain_error("pareto: alpha must be > 0");
    }
    return Distribution(ParetoLaw{scale, shape});
}

Distribution Distribution::bernoulli(double p) {
    require_finite(p, "bern: p");
    if (p < 0.0 || p > 1.0) {
        throw std::domain_error("bern: p must lie in [0,1]");
    }
    std::vector<Atom> atoms;
    if (p < 1.0) {
        atoms.push_back({0.0, 1.0 - p});
    }
    if (p > 0.0) {
        atoms.push_back({1.0, p});
    }
    Distribution d = finite_discrete(std::move(atoms));
    auto& law = std::get<DiscreteLaw>(d.law_);
    law.from_bernoulli = true;
    law.bernoulli_p = p;
    return d;
}

Distribution Distribution::finite_discrete(std::vector<Atom> atoms) {
    if (atoms.empty()) {
        throw std::domain_error("disc: needs at least one atom");
    }
    for (const Atom& a : atoms) {
        require_finite(a.value, "disc: atom value");
        if (!std::isfinite(a.mass) || !(a.mass > 0.0)) {
            throw std::domain_error("disc: atom masses must be > 0");
        }
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });
    for (std::size_t i = 1; i < atoms.size(); ++i) {
        if (atoms[i].value == atoms[i - 1].value) {
            throw std::domain_error("disc: atom values must be distinct");
        }
    }
    double total = 0.0;
    for (const Atom& a : atoms) {
        total += a.mass;
    }
    // Normalize so the stored masses sum to 1 up to rounding.
    for (Atom& a : atoms) {
        a.mass /= total;
    }
    std::vector<double> cum;
    cum.reserve(atoms.size());
    double running = 0.0;
    for (const Atom& a : atoms) {
        running += a.mass;
        cum.push_back(running);
    }
    return Distribution(DiscreteLaw{std::move(atoms), std::move(cum), false, 0.0});
}

Kind Distribution::kind() const noexcept {
    return std::holds_alternative<DiscreteLaw>(law_) ? Kind::discrete : Kind::continuous;
}

double Distribution::cdf(double x) const {
    require_finite(x, "cdf: x");
    return std::visit(
        [x](const auto& law) -> double {
            using L = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<L, UniformLaw>) {
                if (x < law.lo) return 0.0;
                if (x >= law.hi) return 1.0;
                return (x - law.lo) / (law.hi - law.lo);
            } else if constexpr (std::is_same_v<L, ExponentialLaw>) {
                if (x <= 0.0) return 0.0;
                return -std::expm1(-law.rate * x);
            } else if constexpr (std::is_same_v<L, ParetoLaw>) {
                if (x <= law.scale) return 0.0;
                return -std::expm1(law.shape * std::log(law.scale / x));
            } else {
                auto it = std::upper_bound(law.atoms.begin(), law.atoms.end(), x,
                                           [](double q, const Atom& a) { return q < a.value; });
                if (it == law.atoms.begin()) return 0.0;
                return law.cum_mass[static_cast<std::size_t>(it - law.atoms.begin()) - 1];
            }
        },
        law_);
}

double Distribution::cdf_left(double x) const {
    const auto* law = std::get_if<DiscreteLaw>(&law_);
    if (law == nullptr) {
        return cdf(x);
    }
    require_finite(x, "cdf: x");
    auto it = std::lower_bound(law->atoms.begin(), law->atoms.end(), x,
                               [](const Atom& a, double q) { return a.value < q; });
    if (it == law->atoms.begin()) return 0.0;
    return law->cum_mass[static_cast<std::size_t>(it - law->atoms.begin()) - 1];
}

double Distribution::quantile(double p) const {
    if (!std::isfinite(p)) {
        throw std::domain_error("quantile: p must be finite");
    }
    return std::visit(
        [p](const auto& law) -> double {
            using L = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<L, DiscreteLaw>) {
                if (!(p > 0.0) || !(p <= 1.0)) {
                    throw std::domain_error("quantile: p must lie in (0,1] for a discrete law");
                }
                // Smallest atom whose cumulative mass reaches p.
                auto it = std::lower_bound(law.cum_mass.begin(), law.cum_mass.end(), p);
                if (it == law.cum_mass.end()) --it;  // rounding guard: p == 1
                return law.atoms[static_cast<std::size_t>(it - law.cum_mass.begin())].value;
            } else {
                if (!(p > 0.0) || !(p < 1.0)) {
                    throw std::domain_error("quantile: p must lie in (0,1) for a continuous law");
                }
                if constexpr (std::is_same_v<L, UniformLaw>) {
                    // min() guards the rounding of lo + p*(hi-lo) past hi.
                    return std::min(law.lo + p * (law.hi - law.lo), law.hi);
                } else if constexpr (std::is_same_v<L, ExponentialLaw>) {
                    return -std::log1p(-p) / law.rate;
                } else {
                    return law.scale * std::exp(-std::log1p(-p) / law.shape);
                }
            }
        },
        law_);
}

double Distribution::atom_mass(double x) const {
    const auto* law = std::get_if<DiscreteLaw>(&law_);
    if (law == nullptr) {
        throw std::domain_error("atom_mass: law is not discrete");
    }
    auto it = std::lower_bound(law->atoms.begin(), law->atoms.end(), x,
                               [](const Atom& a, double q) { return a.value < q; });
    if (it != law->atoms.end() && it->value == x) {
        return it->mass;
    }
    return 0.0;
}

const std::vector<Atom>& Distribution::atoms() const {
    const auto* law = std::get_if<DiscreteLaw>(&law_);
    if (law == nullptr) {
        throw std::domain_error("atoms: law is not discrete");
    }
    return law->atoms;
}

std::string Distribution::spec() const {
    return std::visit(
        [](const auto& law) -> std::string {
            using L = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<L, UniformLaw>) {
                return "uniform:" + format_double(law.lo) + "," + format_double(law.hi);
            } else if constexpr (std::is_same_v<L, ExponentialLaw>) {
                return "exp:" + format_double(law.rate);
            } else if constexpr (std::is_same_v<L, ParetoLaw>) {
                return "pareto:" + format_double(law.scale) + "," + format_double(law.shape);
            } else {
                if (law.from_bernoulli) {
                    return "bern:" + format_double(law.bernoulli_p);
                }
                std::string out = "disc:";
                for (std::size_t i = 0; i < law.atoms.size(); ++i) {
                    if (i > 0) out += ",";
                    out += format_double(law.atoms[i].value) + ":" + format_double(law.atoms[i].mass);
                }
                return out;
            }
        },
        law_);
}

namespace {

double parse_number(std::string_view text, const std::string& context) {
    if (text.empty()) {
        throw std::invalid_argument("model spec: missing number in " + context);
    }
    std::string buf(text);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(buf, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("model spec: bad number '" + buf + "' in " + context);
    }
    if (used != buf.size() || !std::isfinite(value)) {
        throw std::invalid_argument("model spec: bad number '" + buf + "' in " + context);
    }
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

Distribution parse_model_spec(std::string_view text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw std::invalid_argument("model spec: expected family:params, got '" + std::string(text) + "'");
    }
    const std::string_view family = text.substr(0, colon);
    const std::string_view rest = text.substr(colon + 1);
    const std::string context = std::string(text);

    if (family == "uniform") {
        auto parts = split(rest, ',');
        if (parts.size() != 2) {
            throw std::invalid_argument("model spec: uniform takes a,b");
        }
        return Distribution::uniform(parse_number(parts[0], context), parse_number(parts[1], context));
    }
    if (family == "exp") {
        return Distribution::exponential(parse_number(rest, context));
    }
    if (family == "pareto") {
        auto parts = split(rest, ',');
        if (parts.size() != 2) {
            throw std::invalid_argument("model spec: pareto takes xm,alpha");
        }
        return Distribution::pareto(parse_number(parts[0], context), parse_number(parts[1], context));
    }
    if (family == "bern") {
        return Distribution::bernoulli(parse_number(rest, context));
    }
    if (family == "disc") {
        auto pairs = split(rest, ',');
        std::vector<Atom> atoms;
        atoms.reserve(pairs.size());
        double total = 0.0;
        for (std::string_view pair : pairs) {
            auto vm = split(pair, ':');
            if (vm.size() != 2) {
                throw std::invalid_argument("model spec: disc takes v1:m1,v2:m2,...");
            }
            Atom a{parse_number(vm[0], context), parse_number(vm[1], context)};
            total += a.mass;
            atoms.push_back(a);
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw std::invalid_argument("model spec: disc masses must sum to 1 within 1e-9");
        }
        return Distribution::finite_discrete(std::move(atoms));
    }
    throw std::invalid_argument("model spec: unknown family '" + std::string(family) + "'");
}

}  // namespace ecdflab
