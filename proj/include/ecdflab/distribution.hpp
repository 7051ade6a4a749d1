#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ecdflab {

enum class Kind { continuous, discrete };

struct Atom {
    double value;
    double mass;
};

// An exactly evaluable probability law: closed-form CDF, generalized
// inverse quantile, and (for discrete laws) an explicit atom list.
// Immutable after construction and safe to share across threads.
class Distribution {
public:
    static Distribution uniform(double lo, double hi);
    static Distribution exponential(double rate);
    static Distribution pareto(double scale, double shape);
    static Distribution bernoulli(double p);
    // Atoms may arrive in any order; they are sorted by value. Masses
    // must be positive and are normalized by their sum.
    static Distribution finite_discrete(std::vector<Atom> atoms);

    Kind kind() const noexcept;
    bool is_discrete() const noexcept { return kind() == Kind::discrete; }

    // F(x) = P(X <= x). Right-continuous; the mass at x is included for
    // discrete laws. Throws std::domain_error for non-finite x.
    double cdf(double x) const;

    // Left limit F(x-) = P(X < x). Equal to cdf(x) for continuous laws;
    // for discrete laws the mass at x is excluded, computed from the
    // same running sums as cdf (never by subtraction).
    double cdf_left(double x) const;

    // Generalized inverse inf{x : F(x) >= p}. Domain: p in (0,1) for
    // continuous laws, p in (0,1] for discrete ones.
    double quantile(double p) const;

    // Mass at x under a discrete law; zero when x is not an atom.
    double atom_mass(double x) const;

    // Atoms of a discrete law, ascending by value.
    const std::vector<Atom>& atoms() const;

    // Canonical spec string, e.g. "uniform:0,1" or "bern:0.5".
    std::string spec() const;

private:
    struct UniformLaw {
        double lo, hi;
    };
    struct ExponentialLaw {
        double rate;
    };
    struct ParetoLaw {
        double scale, shape;
    };
    struct DiscreteLaw {
        std::vector<Atom> atoms;       // ascending by value, masses normalized
        std::vector<double> cum_mass;  // running sums of the masses
        bool from_bernoulli;
        double bernoulli_p;
    };
    using Law = std::variant<UniformLaw, ExponentialLaw, ParetoLaw, DiscreteLaw>;

    explicit Distribution(Law law) : law_(std::move(law)) {}

    Law law_;
};

// Parses the CLI model grammar:
//   uniform:a,b | exp:rate | pareto:xm,alpha | bern:p | disc:v1:m1,v2:m2,...
// disc masses must sum to 1 within 1e-9. Throws std::invalid_argument on
// malformed input.
Distribution parse_model_spec(std::string_view text);

}  // namespace ecdflab
