// SPDX-License-Identifier: Apache-2.0
#include "finsler/vector_field.hpp"

#include "finsler/error.hpp"

namespace finsler {

using ad::Jet;
using ad::JetSpace;

VectorField::VectorField(int dim, Components components, nlohmann::json description)
    : dim_(dim), components_(std::move(components)), description_(std::move(description)) {
  if (dim_ < 1) throw Error(ErrorKind::invalid_params, "vector field dimension must be positive");
}

VectorField VectorField::zero(int dim) {
  return {dim,
          [dim](std::span<const Jet>) { return std::vector<Jet>(static_cast<std::size_t>(dim), Jet(0.0)); },
          {{"type", "zero"}}};
}

VectorField VectorField::radial(int dim, double scale) {
  return {dim,
          [scale](std::span<const Jet> x) {
            std::vector<Jet> v;
            v.reserve(x.size());
            for (const Jet& xi : x) v.push_back(scale * xi);
            return v;
          },
          {{"type", "radial"}, {"scale", scale}}};
}

VectorField VectorField::rotation(int dim, int i, int j) {
  if (i < 0 || j < 0 || i >= dim || j >= dim || i == j) {
    throw Error(ErrorKind::invalid_params, "rotation plane indices out of range");
  }
  return {dim,
          [dim, i, j](std::span<const Jet> x) {
            std::vector<Jet> v(static_cast<std::size_t>(dim), Jet(0.0));
            v[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(i)];
            v[static_cast<std::size_t>(i)] = -x[static_cast<std::size_t>(j)];
            return v;
          },
          {{"type", "rotation"}, {"plane", {i + 1, j + 1}}}};
}

VectorField VectorField::from_expressions(const std::vector<Expression>& components) {
  const int dim = static_cast<int>(components.size());
  nlohmann::json desc = {{"type", "expression"}, {"components", nlohmann::json::array()}};
  for (const auto& c : components) {
    if (c.max_y_index() > 0) throw Error(ErrorKind::usage, "vector field components must not depend on y");
    if (c.max_x_index() > dim) throw Error(ErrorKind::usage, "vector field references x beyond its dimension");
    desc["components"].push_back(c.to_string());
  }
  return {dim,
          [components](std::span<const Jet> x) {
            std::vector<Jet> v;
            v.reserve(components.size());
            for (const auto& c : components) v.push_back(c.evaluate(x, {}));
            return v;
          },
          std::move(desc)};
}

VectorField VectorField::from_json(const nlohmann::json& j, int dim) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "zero") return zero(dim);
    throw Error(ErrorKind::usage, "unknown vector field \"" + name + "\"");
  }
  if (j.is_object()) {
    const std::string type = j.value("type", std::string());
    if (type == "zero") return zero(dim);
    if (type == "radial") return radial(dim, j.value("scale", 1.0));
    if (type == "rotation") {
      const auto plane = j.value("plane", std::vector<int>{1, 2});
      if (plane.size() != 2) throw Error(ErrorKind::usage, "field \"V.plane\" needs two indices");
      return rotation(dim, plane[0] - 1, plane[1] - 1);
    }
    if (type == "expression" && j.contains("components")) return from_json(j["components"], dim);
    throw Error(ErrorKind::usage, "field \"V.type\" must be zero, radial, rotation or expression");
  }
  if (!j.is_array()) throw Error(ErrorKind::usage, "field \"V\" must be a list of component expressions");
  if (static_cast<int>(j.size()) != dim) {
    throw Error(ErrorKind::usage, "field \"V\" has " + std::to_string(j.size()) + " components, expected " +
                                      std::to_string(dim));
  }
  std::vector<Expression> comps;
  for (const auto& c : j) comps.push_back(c.is_string() ? Expression::parse(c.get<std::string>()) : Expression::parse(c));
  return from_expressions(comps);
}

VectorField VectorField::random_polynomial(int dim, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  const auto n = static_cast<std::size_t>(dim);
  // V^m = c0[m] + c1[m][p] x^p + c2[m][p][q] x^p x^q, p <= q
  std::vector<double> c0(n), c1(n * n), c2(n * n * n, 0.0);
  for (auto& c : c0) c = u(rng);
  for (auto& c : c1) c = u(rng);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p; q < n; ++q) c2[(m * n + p) * n + q] = u(rng);
  nlohmann::json desc = {{"type", "polynomial"}, {"c0", c0}, {"c1", c1}, {"c2", c2}};
  return {dim,
          [n, c0, c1, c2](std::span<const Jet> x) {
            std::vector<Jet> v;
            v.reserve(n);
            for (std::size_t m = 0; m < n; ++m) {
              Jet acc(c0[m]);
              for (std::size_t p = 0; p < n; ++p) {
                acc += c1[m * n + p] * x[p];
                for (std::size_t q = p; q < n; ++q) acc += c2[(m * n + p) * n + q] * (x[p] * x[q]);
              }
              v.push_back(std::move(acc));
            }
            return v;
          },
          std::move(desc)};
}

std::vector<double> VectorField::values(std::span<const double> x) const {
  std::vector<Jet> xj(x.begin(), x.end());
  const auto v = components_(xj);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].value();
  return out;
}

void VectorField::evaluate(std::span<const double> x, std::vector<double>& values,
                           std::vector<double>& jacobian) const {
  const JetSpace& space = JetSpace::get(dim_, 1);
  std::vector<Jet> xj;
  xj.reserve(x.size());
  for (int i = 0; i < dim_; ++i) xj.push_back(Jet::variable(space, i, x[static_cast<std::size_t>(i)]));
  const auto v = components_(xj);
  if (static_cast<int>(v.size()) != dim_) throw Error(ErrorKind::invalid_params, "vector field size mismatch");
  const auto n = static_cast<std::size_t>(dim_);
  values.assign(n, 0.0);
  jacobian.assign(n * n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    values[m] = v[m].value();
    if (v[m].is_scalar()) continue;
    for (std::size_t p = 0; p < n; ++p) jacobian[m * n + p] = v[m].coefficient(space.variable_monomial(static_cast<int>(p)));
  }
}

std::vector<double> VectorField::jacobian(std::span<const double> x) const {
  std::vector<double> v, j;
  evaluate(x, v, j);
  return j;
}

}  // namespace finsler
