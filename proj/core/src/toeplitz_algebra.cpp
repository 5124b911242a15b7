#include "kms/toeplitz_algebra.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "kms/errors.hpp"

namespace kms {

Word Word::identity(Dimensions dims, int level) {
  return Word{IntVector(static_cast<std::size_t>(dims.k), 0), IntVector(static_cast<std::size_t>(dims.d), 0),
              IntVector(static_cast<std::size_t>(dims.k), 0), level};
}

namespace {

void write_list(std::ostringstream& os, const IntVector& v) {
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << "]";
}

class WordParser {
 public:
  explicit WordParser(std::string_view text) : text_(text) {}

  Word parse() {
    Word w;
    expect("V");
    w.p = list();
    expect("U");
    w.n = list();
    expect("V*");
    w.q = list();
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '@') {
      ++pos_;
      skip_ws();
      w.level = static_cast<int>(integer());
    }
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    if (w.p.size() != w.q.size()) fail("V and V* lists must have the same length");
    if (!is_nonnegative(w.p) || !is_nonnegative(w.q)) fail("V and V* indices must be >= 0");
    if (w.level < 1) fail("level must be >= 1");
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    raise(Errc::WordParseError, why + " at offset " + std::to_string(pos_) + " in \"" + std::string(text_) + "\"");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(std::string_view token) {
    skip_ws();
    if (text_.substr(pos_, token.size()) != token) fail("expected '" + std::string(token) + "'");
    pos_ += token.size();
  }

  std::int64_t integer() {
    skip_ws();
    std::int64_t value = 0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    if (begin != end && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc()) fail("expected an integer");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }

  IntVector list() {
    skip_ws();
    expect("[");
    IntVector out;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ']') fail("empty index list");
    while (true) {
      out.push_back(integer());
      skip_ws();
      if (pos_ >= text_.size()) fail("unterminated list");
      if (text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (text_[pos_] == ']') {
        ++pos_;
        break;
      }
      fail("expected ',' or ']'");
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void check_same_level(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.level() != b.level()) {
    raise(Errc::LevelMismatch,
          "elements live at levels " + std::to_string(a.level()) + " and " + std::to_string(b.level()));
  }
}

}  // namespace

std::string to_string(const Word& w) {
  std::ostringstream os;
  os << "V";
  write_list(os, w.p);
  os << " U";
  write_list(os, w.n);
  os << " V*";
  write_list(os, w.q);
  os << " @ " << w.level;
  return os.str();
}

Word parse_word(std::string_view text) { return WordParser(text).parse(); }

AlgebraElement::AlgebraElement(const Word& w, Complex c) : level_(w.level) { add(w, c); }

void AlgebraElement::add(const Word& w, Complex c) {
  if (w.level != level_) raise(Errc::LevelMismatch, "word level differs from element level");
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kPruneThreshold) terms_.erase(it);
}

Complex AlgebraElement::coefficient(const Word& w) const {
  const auto it = terms_.find(w);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  check_same_level(*this, other);
  for (const auto& [w, c] : other.terms_) add(w, c);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  check_same_level(*this, other);
  for (const auto& [w, c] : other.terms_) add(w, -c);
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex c) {
  Terms scaled;
  for (const auto& [w, v] : terms_) {
    const Complex nv = v * c;
    if (std::abs(nv) >= kPruneThreshold) scaled.emplace(w, nv);
  }
  terms_ = std::move(scaled);
  return *this;
}

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
AlgebraElement operator*(Complex c, AlgebraElement a) { return a *= c; }

double max_coefficient_distance(const AlgebraElement& a, const AlgebraElement& b) {
  double worst = 0.0;
  for (const auto& [w, c] : a.terms()) worst = std::max(worst, std::abs(c - b.coefficient(w)));
  for (const auto& [w, c] : b.terms()) {
    if (a.terms().find(w) == a.terms().end()) worst = std::max(worst, std::abs(c));
  }
  return worst;
}

Complex multiply_words(const Word& a, const Word& b, const RealMatrix& theta, Word& out) {
  if (a.level != b.level) raise(Errc::LevelMismatch, "words live at different levels");
  if (static_cast<Eigen::Index>(a.p.size()) != theta.rows() || static_cast<Eigen::Index>(a.n.size()) != theta.cols()) {
    raise(Errc::InvalidArgument, "word dimensions do not match theta");
  }
  // V_q^* V_{p'} = V_{(q v p') - q} V^*_{(q v p') - p'}
  const IntVector top = join(a.q, b.p);
  const IntVector left = subtract(top, a.q);
  const IntVector right = subtract(top, b.p);
  const double t = dot(left, apply_theta(theta, a.n)) + dot(right, apply_theta(theta, b.n));
  out.p = add(a.p, left);
  out.n = add(a.n, b.n);
  out.q = add(b.q, right);
  out.level = a.level;
  return character(t);
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b, const RealMatrix& theta) {
  check_same_level(a, b);
  AlgebraElement out(a.level());
  Word w;
  for (const auto& [wa, ca] : a.terms()) {
    for (const auto& [wb, cb] : b.terms()) {
      const Complex phase = multiply_words(wa, wb, theta, w);
      out.add(w, phase * ca * cb);
    }
  }
  return out;
}

AlgebraElement adjoint(const AlgebraElement& a) {
  AlgebraElement out(a.level());
  for (const auto& [w, c] : a.terms()) out.add(Word{w.q, negate(w.n), w.p, w.level}, std::conj(c));
  return out;
}

AlgebraElement apply_dynamics(const AlgebraElement& a, Complex t, const RealVector& r) {
  AlgebraElement out(a.level());
  const Complex i(0.0, 1.0);
  for (const auto& [w, c] : a.terms()) {
    const double x = dot(subtract(w.p, w.q), r);
    out.add(w, c * std::exp(i * t * x));
  }
  return out;
}

Complex state_eval(const TorusMeasure& nu, const BlockParams& P, const AlgebraElement& a) {
  Complex sum = 0.0;
  for (const auto& [w, c] : a.terms()) {
    if (w.p != w.q) continue;
    sum += c * std::exp(-P.beta * dot(w.p, P.r)) * nu.moment(w.n);
  }
  return sum;
}

double kms_residual(const TorusMeasure& nu, const BlockParams& P, const AlgebraElement& a, const AlgebraElement& b) {
  check_same_level(a, b);
  const Complex lhs = state_eval(nu, P, multiply(a, b, P.theta));
  const AlgebraElement rotated = apply_dynamics(a, Complex(0.0, P.beta), P.r);
  const Complex rhs = state_eval(nu, P, multiply(b, rotated, P.theta));
  return std::abs(lhs - rhs);
}

}  // namespace kms
