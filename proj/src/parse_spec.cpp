#include <cctype>
#include <charconv>
#include <string>
#include <variant>
#include <vector>

#include "minmax/distributions.hpp"
#include "minmax/error.hpp"

namespace mmh {

namespace {

using Arg = std::variant<double, DistributionSpec>;

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  DistributionSpec parse_all() {
    DistributionSpec spec = parse_spec();
    skip_space();
    if (pos_ != text_.size()) throw ParseError(pos_, "unexpected trailing input");
    return spec;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) throw ParseError(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string parse_name() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) throw ParseError(pos_, "expected distribution name");
    return std::string(text_.substr(start, pos_ - start));
  }

  double parse_number() {
    skip_space();
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    if (first != last && *first == '+') ++first;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
    if (ec != std::errc() || ptr == first) throw ParseError(pos_, "expected decimal number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }

  bool next_is_name() {
    skip_space();
    return pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]));
  }

  DistributionSpec parse_spec() {
    const std::size_t name_pos = (skip_space(), pos_);
    const std::string name = parse_name();
    expect('(');
    std::vector<Arg> args;
    std::vector<std::size_t> arg_pos;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ')') {
      ++pos_;
    } else {
      for (;;) {
        skip_space();
        arg_pos.push_back(pos_);
        if (name == "atomzero" && args.size() == 1 && next_is_name()) {
          args.emplace_back(parse_spec());
        } else {
          args.emplace_back(parse_number());
        }
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        expect(')');
        break;
      }
    }
    return build(name, name_pos, args, arg_pos);
  }

  double number(const std::vector<Arg>& args, const std::vector<std::size_t>& at, std::size_t i) {
    if (const double* v = std::get_if<double>(&args[i])) return *v;
    throw ParseError(at[i], "expected decimal number");
  }

  DistributionSpec build(const std::string& name, std::size_t name_pos, const std::vector<Arg>& args,
                         const std::vector<std::size_t>& at) {
    auto arity = [&](std::size_t n) {
      if (args.size() != n)
        throw ParseError(name_pos, name + " takes " + std::to_string(n) + " argument(s), got " +
                                       std::to_string(args.size()));
    };
    if (name == "exp") {
      arity(1);
      return dist::exponential(number(args, at, 0));
    }
    if (name == "uniform") {
      arity(2);
      return dist::uniform(number(args, at, 0), number(args, at, 1));
    }
    if (name == "pareto") {
      arity(2);
      return dist::pareto(number(args, at, 0), number(args, at, 1));
    }
    if (name == "weibull") {
      arity(2);
      return dist::weibull(number(args, at, 0), number(args, at, 1));
    }
    if (name == "halfnormal") {
      arity(1);
      return dist::halfnormal(number(args, at, 0));
    }
    if (name == "lognormal") {
      arity(2);
      return dist::lognormal(number(args, at, 0), number(args, at, 1));
    }
    if (name == "constant") {
      arity(1);
      return dist::constant(number(args, at, 0));
    }
    if (name == "atomzero") {
      arity(2);
      const auto* base = std::get_if<DistributionSpec>(&args[1]);
      if (!base) throw ParseError(at[1], "atomzero expects a distribution as second argument");
      return dist::atomzero(number(args, at, 0), *base);
    }
    if (name == "loglight") {
      arity(0);
      return dist::loglight();
    }
    if (name == "stablemod") {
      arity(1);
      return dist::stablemod(number(args, at, 0));
    }
    throw ParseError(name_pos, "unknown distribution '" + name + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

DistributionSpec parse_spec(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace mmh
