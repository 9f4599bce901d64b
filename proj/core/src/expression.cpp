// SPDX-License-Identifier: Apache-2.0
#include "finsler/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>

#include "finsler/error.hpp"

namespace finsler {
namespace {

using Op = Expression::Op;

const std::map<std::string, Op>& operator_table() {
  static const std::map<std::string, Op> table = {
      {"+", Op::add},       {"add", Op::add},   {"-", Op::sub},     {"sub", Op::sub},   {"*", Op::mul},
      {"mul", Op::mul},     {"/", Op::div},     {"div", Op::div},   {"pow", Op::pow},   {"^", Op::pow},
      {"sqrt", Op::sqrt},   {"exp", Op::exp},   {"log", Op::log},   {"sin", Op::sin},   {"cos", Op::cos},
      {"abs", Op::abs},     {"neg", Op::neg},
  };
  return table;
}

const char* op_name(Op op) {
  switch (op) {
    case Op::add: return "+";
    case Op::sub: return "-";
    case Op::mul: return "*";
    case Op::div: return "/";
    case Op::pow: return "pow";
    case Op::sqrt: return "sqrt";
    case Op::exp: return "exp";
    case Op::log: return "log";
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::abs: return "abs";
    case Op::neg: return "neg";
    default: return "?";
  }
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::usage, "expression: " + what); }

// Tokenizes an S-expression into a JSON array tree so both encodings share one parser.
class SexprReader {
 public:
  explicit SexprReader(const std::string& s) : s_(s) {}

  nlohmann::json read() {
    auto j = item();
    skip();
    if (pos_ != s_.size()) bad("trailing characters at offset " + std::to_string(pos_));
    return j;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  nlohmann::json item() {
    skip();
    if (pos_ >= s_.size()) bad("unexpected end of input");
    if (s_[pos_] == '(') {
      ++pos_;
      nlohmann::json arr = nlohmann::json::array();
      while (true) {
        skip();
        if (pos_ >= s_.size()) bad("missing ')'");
        if (s_[pos_] == ')') {
          ++pos_;
          break;
        }
        arr.push_back(item());
      }
      return arr;
    }
    if (s_[pos_] == ')') bad("unexpected ')' at offset " + std::to_string(pos_));
    const std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' &&
           s_[pos_] != ')') {
      ++pos_;
    }
    const std::string tok = s_.substr(start, pos_ - start);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec == std::errc() && ptr == tok.data() + tok.size()) return v;
    return tok;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const nlohmann::json& source) {
  if (source.is_string()) return parse(source.get<std::string>());
  return Expression(parse_json(source));
}

Expression Expression::parse(const std::string& source) {
  const bool sexpr = source.find('(') != std::string::npos;
  nlohmann::json tree = sexpr ? SexprReader(source).read() : nlohmann::json(source);
  if (!sexpr) {
    // a bare leaf: number or coordinate name
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(source.data(), source.data() + source.size(), v);
    if (ec == std::errc() && ptr == source.data() + source.size()) tree = v;
  }
  return Expression(parse_json(tree));
}

Expression Expression::constant(double value) {
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->value = value;
  return Expression(n);
}

Expression Expression::coordinate(bool is_y, int index0) {
  auto n = std::make_shared<Node>();
  n->op = is_y ? Op::y : Op::x;
  n->index = index0;
  return Expression(n);
}

std::shared_ptr<const Expression::Node> Expression::parse_json(const nlohmann::json& j) {
  auto n = std::make_shared<Node>();
  if (j.is_number()) {
    n->op = Op::constant;
    n->value = j.get<double>();
    return n;
  }
  if (j.is_string()) {
    std::string name = j.get<std::string>();
    if (name == "pi") {
      n->op = Op::constant;
      n->value = 3.14159265358979323846;
      return n;
    }
    if (name.size() < 2 || (name[0] != 'x' && name[0] != 'y')) bad("unknown symbol '" + name + "'");
    std::string digits = name.substr(name[1] == '_' ? 2 : 1);
    int idx = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || idx < 1) {
      bad("bad coordinate '" + name + "' (expected x1.., y1..)");
    }
    n->op = name[0] == 'x' ? Op::x : Op::y;
    n->index = idx - 1;
    return n;
  }
  if (!j.is_array() || j.empty() || !j[0].is_string()) bad("expected [\"op\", args...], got " + j.dump());
  const std::string op = j[0].get<std::string>();
  const auto it = operator_table().find(op);
  if (it == operator_table().end()) bad("unknown operator '" + op + "'");
  n->op = it->second;
  for (std::size_t k = 1; k < j.size(); ++k) n->args.push_back(parse_json(j[k]));
  const std::size_t argc = n->args.size();
  switch (n->op) {
    case Op::add:
    case Op::mul:
      if (argc < 2) bad(op + " needs at least two arguments");
      break;
    case Op::sub:
      if (argc == 1) n->op = Op::neg;
      else if (argc != 2) bad("- takes one or two arguments");
      break;
    case Op::div:
    case Op::pow:
      if (argc != 2) bad(op + " takes two arguments");
      break;
    default:
      if (argc != 1) bad(op + " takes one argument");
  }
  return n;
}

ad::Jet Expression::evaluate(std::span<const ad::Jet> x, std::span<const ad::Jet> y) const {
  return eval(*root_, x, y);
}

ad::Jet Expression::eval(const Node& n, std::span<const ad::Jet> x, std::span<const ad::Jet> y) {
  switch (n.op) {
    case Op::constant: return ad::Jet(n.value);
    case Op::x:
      if (static_cast<std::size_t>(n.index) >= x.size()) bad("x" + std::to_string(n.index + 1) + " beyond dim");
      return x[static_cast<std::size_t>(n.index)];
    case Op::y:
      if (static_cast<std::size_t>(n.index) >= y.size()) bad("y" + std::to_string(n.index + 1) + " beyond dim");
      return y[static_cast<std::size_t>(n.index)];
    case Op::add: {
      ad::Jet acc = eval(*n.args[0], x, y);
      for (std::size_t k = 1; k < n.args.size(); ++k) acc += eval(*n.args[k], x, y);
      return acc;
    }
    case Op::mul: {
      ad::Jet acc = eval(*n.args[0], x, y);
      for (std::size_t k = 1; k < n.args.size(); ++k) acc = acc * eval(*n.args[k], x, y);
      return acc;
    }
    case Op::sub: return eval(*n.args[0], x, y) - eval(*n.args[1], x, y);
    case Op::div: return eval(*n.args[0], x, y) / eval(*n.args[1], x, y);
    case Op::pow: return ad::pow(eval(*n.args[0], x, y), eval(*n.args[1], x, y));
    case Op::sqrt: return ad::sqrt(eval(*n.args[0], x, y));
    case Op::exp: return ad::exp(eval(*n.args[0], x, y));
    case Op::log: return ad::log(eval(*n.args[0], x, y));
    case Op::sin: return ad::sin(eval(*n.args[0], x, y));
    case Op::cos: return ad::cos(eval(*n.args[0], x, y));
    case Op::abs: return ad::abs(eval(*n.args[0], x, y));
    case Op::neg: return -eval(*n.args[0], x, y);
  }
  return ad::Jet(0.0);
}

void Expression::scan(const Node& n, int& max_x, int& max_y) {
  if (n.op == Op::x) max_x = std::max(max_x, n.index + 1);
  if (n.op == Op::y) max_y = std::max(max_y, n.index + 1);
  for (const auto& a : n.args) scan(*a, max_x, max_y);
}

int Expression::max_x_index() const {
  int mx = 0;
  int my = 0;
  scan(*root_, mx, my);
  return mx;
}

int Expression::max_y_index() const {
  int mx = 0;
  int my = 0;
  scan(*root_, mx, my);
  return my;
}

void Expression::write(const Node& n, std::string& out) {
  switch (n.op) {
    case Op::constant: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case Op::x: out += "x" + std::to_string(n.index + 1); return;
    case Op::y: out += "y" + std::to_string(n.index + 1); return;
    default: break;
  }
  out += '(';
  out += op_name(n.op);
  for (const auto& a : n.args) {
    out += ' ';
    write(*a, out);
  }
  out += ')';
}

std::string Expression::to_string() const {
  std::string out;
  write(*root_, out);
  return out;
}

}  // namespace finsler
