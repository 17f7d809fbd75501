#include "heightkit/form.hpp"

#include <cctype>
#include <numeric>

#include "heightkit/errors.hpp"

namespace heightkit {

Form Form::monomial(const Exponents& exponents, const Rat& coefficient) {
  if (exponents.empty()) throw ValidationError("monomial needs at least one variable");
  int degree = 0;
  for (int e : exponents) {
    if (e < 0) throw ValidationError("negative exponent in a section");
    degree += e;
  }
  Form f(exponents.size(), degree);
  f.add_term(exponents, coefficient);
  return f;
}

Form Form::variable(std::size_t i, std::size_t vars) {
  if (i >= vars) throw ValidationError("variable index out of range");
  Exponents e(vars, 0);
  e[i] = 1;
  return monomial(e);
}

void Form::add_term(const Exponents& e, const Rat& coefficient) {
  Rat c = coefficient;
  c.canonicalize();
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

const Exponents& Form::monomial_exponents() const {
  if (!is_monomial()) throw ValidationError("section is not a monomial");
  return terms_.begin()->first;
}

Rat Form::evaluate(const RatVector& x) const {
  if (x.size() != vars_) throw ValidationError("point has the wrong number of coordinates");
  Rat total = 0;
  for (const auto& [e, c] : terms_) {
    Rat t = c;
    for (std::size_t i = 0; i < vars_; ++i)
      if (e[i]) t *= rat_pow(x[i], e[i]);
    total += t;
  }
  return total;
}

Real Form::evaluate(const RealVector& x) const {
  if (x.size() != vars_) throw ValidationError("point has the wrong number of coordinates");
  Real total = 0;
  for (const auto& [e, c] : terms_) {
    Real t = to_real(c);
    for (std::size_t i = 0; i < vars_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= x[i];
    total += t;
  }
  return total;
}

Form Form::operator+(const Form& o) const {
  if (vars_ != o.vars_) throw ValidationError("forms in different numbers of variables");
  if (!is_zero() && !o.is_zero() && degree_ != o.degree_) throw ValidationError("sum of forms of different degrees");
  Form r(vars_, is_zero() ? o.degree_ : degree_);
  r.terms_ = terms_;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Form Form::operator*(const Form& o) const {
  if (vars_ != o.vars_) throw ValidationError("forms in different numbers of variables");
  Form r(vars_, degree_ + o.degree_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      Exponents e(vars_);
      for (std::size_t i = 0; i < vars_; ++i) e[i] = e1[i] + e2[i];
      r.add_term(e, c1 * c2);
    }
  return r;
}

Form Form::scaled(const Rat& c) const {
  Form r(vars_, degree_);
  for (const auto& [e, v] : terms_) r.add_term(e, v * c);
  return r;
}

Form Form::substitute(const RatMatrix& a) const {
  if (a.rows() != vars_ || a.cols() != vars_) throw ValidationError("substitution matrix has the wrong size");
  // Linear forms y_i = sum_j a_ij x_j, then expand monomial by monomial.
  std::vector<Form> linear;
  for (std::size_t i = 0; i < vars_; ++i) {
    Form y(vars_, 1);
    for (std::size_t j = 0; j < vars_; ++j) {
      Exponents e(vars_, 0);
      e[j] = 1;
      y.add_term(e, a(i, j));
    }
    linear.push_back(y);
  }
  Form result(vars_, degree_);
  for (const auto& [e, c] : terms_) {
    Form t = monomial(Exponents(vars_, 0), c);
    for (std::size_t i = 0; i < vars_; ++i)
      for (int k = 0; k < e[i]; ++k) t = t * linear[i];
    result = result + t;
  }
  result.degree_ = degree_;
  return result;
}

std::string Form::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string coeff = format_rat(c);
    if (!out.empty()) {
      if (sgn(c) < 0) {
        out += " - ";
        coeff = format_rat(-c);
      } else {
        out += " + ";
      }
    }
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) out += coeff;
    else if (coeff == "1") out += mono;
    else if (coeff == "-1") out += "-" + mono;
    else out += coeff + "*" + mono;
  }
  return out;
}

namespace {

// Recursive-descent over: form := term (('+'|'-') term)*, term := factor ('*' factor)*.
class FormParser {
 public:
  FormParser(const std::string& text, std::size_t vars) : text_(text), vars_(vars) {}

  Form parse() {
    skip();
    bool negative = false;
    if (peek() == '-' || peek() == '+') negative = text_[pos_++] == '-';
    Form total = term();
    if (negative) total = total.scaled(-1);
    for (skip(); pos_ < text_.size(); skip()) {
      const char op = text_[pos_++];
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      Form t = term();
      total = total + (op == '-' ? t.scaled(-1) : t);
    }
    return total;
  }

 private:
  Form term() {
    Form t = Form::monomial(Exponents(vars_, 0));
    bool any = false;
    for (;;) {
      skip();
      t = t * factor();
      any = true;
      skip();
      if (peek() != '*') break;
      ++pos_;
    }
    if (!any) fail("empty term");
    return t;
  }

  Form factor() {
    if (peek() == 'x') {
      ++pos_;
      const std::size_t i = number();
      if (i >= vars_) fail("variable x" + std::to_string(i) + " out of range");
      int power = 1;
      if (peek() == '^') {
        ++pos_;
        power = static_cast<int>(number());
      }
      Exponents e(vars_, 0);
      e[i] = power;
      return Form::monomial(e);
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/' ||
                                   text_[pos_] == '.'))
      ++pos_;
    if (start == pos_) fail("expected a coefficient or variable");
    return Form::monomial(Exponents(vars_, 0), parse_rat(text_.substr(start, pos_ - start)));
  }

  std::size_t number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::stoul(text_.substr(start, pos_ - start));
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw ValidationError("cannot parse section '" + text_ + "': " + why);
  }

  const std::string& text_;
  std::size_t vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Form parse_form(const std::string& text, std::size_t vars) {
  if (vars == 0) throw ValidationError("a section needs at least one variable");
  Form f = FormParser(text, vars).parse();
  if (f.is_zero()) throw ValidationError("section is identically zero");
  return f;
}

}  // namespace heightkit
