#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace biostab {

struct Params;

// Phototaxis response: G -> (M, dM/dG). M is the signed mean swimming
// magnitude along the light-flux direction; positive below the critical
// intensity G_c, negative above, |M| <= 1.
class TaxisFunction {
  public:
    using Evaluator = std::function<std::pair<double, double>(double)>;

    TaxisFunction() = default;
    TaxisFunction(std::string name, std::vector<double> parameters, Evaluator eval)
        : name_(std::move(name)), parameters_(std::move(parameters)), eval_(std::move(eval)) {}

    std::pair<double, double> operator()(double G) const { return eval_(G); }
    double value(double G) const { return eval_(G).first; }
    double derivative(double G) const { return eval_(G).second; }

    const std::string& name() const { return name_; }
    const std::vector<double>& parameters() const { return parameters_; }

  private:
    std::string name_;
    std::vector<double> parameters_;
    Evaluator eval_;
};

// Default smooth response M(G) = m_max * tanh(s * (G_c - G)).
TaxisFunction make_tanh_taxis(double m_max, double steepness, double G_c);
TaxisFunction make_tanh_taxis(const Params& p);

// (M, dM/dG) at G >= 0. Total function, no error paths.
std::pair<double, double> taxis_eval(const TaxisFunction& taxis, double G);

// Sampled admissibility checks: sign change at G_c, |M| <= 1, continuity,
// and dM/dG against centered differences (1e-6 relative). Returns one
// message per violation; run before any solve begins.
std::vector<std::string> validate_taxis(const TaxisFunction& taxis, double G_c,
                                        int samples = 400);
void validate_taxis_or_throw(const TaxisFunction& taxis, double G_c);

}  // namespace biostab
