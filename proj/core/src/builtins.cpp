#include "monoreg/builtins.hpp"

#include "monoreg/error.hpp"

namespace monoreg {

namespace {

using Fn = std::function<double(std::span<const double>)>;

double paraboloid_fit(double x) {
  const double q = (x - 0.5) * (x - 0.5);
  return x <= 0.75 ? 0.0625 : q;
}

Builtin make(std::string name, std::string description, Box box, Signature sig, Fn f,
             Regularity reg, std::optional<Fn> exact) {
  return Builtin{std::move(name), std::move(description), std::move(box), std::move(sig),
                 ScalarField{std::move(f), reg, std::nullopt}, std::move(exact)};
}

}  // namespace

Builtin builtin(const std::string& name) {
  if (name == "paraboloid1d")
    return make(name, "(x-0.5)^2 on [0,1]", Box::unit(1), Signature({1}),
                [](std::span<const double> x) { return (x[0] - 0.5) * (x[0] - 0.5); },
                Regularity::Continuous, Fn([](std::span<const double> x) { return paraboloid_fit(x[0]); }));
  if (name == "monotone-plane")
    return make(name, "x+y on [0,1]^2", Box::unit(2), Signature({1, 1}),
                [](std::span<const double> x) { return x[0] + x[1]; }, Regularity::Continuous,
                Fn([](std::span<const double> x) { return x[0] + x[1]; }));
  if (name == "saddle")
    return make(name, "(x-0.5)^2-(y-0.5)^2 on [0,1]^2", Box::unit(2), Signature({1, 1}),
                [](std::span<const double> x) {
                  return (x[0] - 0.5) * (x[0] - 0.5) - (x[1] - 0.5) * (x[1] - 0.5);
                },
                Regularity::Continuous, std::nullopt);
  if (name == "step-mixture")
    return make(name, "1 on [0,0.3), 0 on [0.3,0.6), 2 on [0.6,1]", Box::unit(1), Signature({1}),
                [](std::span<const double> x) { return x[0] < 0.3 ? 1.0 : x[0] < 0.6 ? 0.0 : 2.0; },
                Regularity::Bounded,
                Fn([](std::span<const double> x) { return x[0] < 0.6 ? 0.5 : 2.0; }));
  if (name == "paraboloid-plane")
    return make(name, "(x-0.5)^2+y on [0,1]^2", Box::unit(2), Signature({1, 1}),
                [](std::span<const double> x) { return (x[0] - 0.5) * (x[0] - 0.5) + x[1]; },
                Regularity::Continuous,
                Fn([](std::span<const double> x) { return paraboloid_fit(x[0]) + x[1]; }));
  if (name == "neg-line")
    return make(name, "-x on [0,1]", Box::unit(1), Signature({1}),
                [](std::span<const double> x) { return -x[0]; }, Regularity::Continuous,
                Fn([](std::span<const double>) { return -0.5; }));
  throw Error("unknown builtin '" + name + "'");
}

std::vector<std::string> builtin_names() {
  return {"paraboloid1d", "monotone-plane", "saddle", "step-mixture", "paraboloid-plane", "neg-line"};
}

}  // namespace monoreg
