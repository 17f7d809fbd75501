#include "heightkit/textio.hpp"

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <vector>

#include "heightkit/errors.hpp"
#include "heightkit/places.hpp"

namespace heightkit {

namespace {

std::vector<std::string> tokens(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string w;
    while (words >> w) out.push_back(w);
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const std::string& text) : tok_(tokens(text)) {}

  bool done() const { return pos_ == tok_.size(); }
  const std::string& next(const char* what) {
    if (done()) throw ValidationError(std::string("unexpected end of input, expected ") + what);
    return tok_[pos_++];
  }

  std::size_t header() {
    if (next("`rank d` header") != "rank") throw ValidationError("input must start with `rank d`");
    const std::string& d = next("rank");
    std::size_t used = 0;
    long r = 0;
    try {
      r = std::stol(d, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != d.size() || r < 1 || r > 64) throw ValidationError("bad rank '" + d + "'");
    return static_cast<std::size_t>(r);
  }

  RatMatrix rational_block(std::size_t d) {
    RatMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) m(i, j) = parse_rat(next("matrix entry"));
    return m;
  }

  RealMatrix real_block(std::size_t d) {
    RealMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const std::string& t = next("matrix entry");
        std::size_t used = 0;
        Real v = 0;
        try {
          v = std::stold(t, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != t.size()) throw ValidationError("bad real entry '" + t + "'");
        m(i, j) = v;
      }
    return m;
  }

 private:
  std::vector<std::string> tok_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RatMatrix parse_rational_matrix_text(const std::string& text) {
  Reader r(text);
  const std::size_t d = r.header();
  RatMatrix m = r.rational_block(d);
  if (!r.done()) throw ValidationError("trailing entries after the matrix");
  return m;
}

HermitianLattice parse_gram_text(const std::string& text) {
  return HermitianLattice::from_rational(parse_rational_matrix_text(text));
}

AdelicGroupElement parse_twist_text(const std::string& text) {
  Reader r(text);
  const std::size_t d = r.header();
  AdelicGroupElement g = AdelicGroupElement::identity(d);
  while (!r.done()) {
    const std::string kind = r.next("block keyword");
    if (kind == "default") {
      g = g.with_default(r.rational_block(d));
    } else if (kind == "place") {
      const std::string where = r.next("place");
      if (where == "inf") {
        g = g.with(Place::infinite(), r.rational_block(d));
      } else {
        BigInt p;
        if (p.set_str(where, 10) != 0) throw ValidationError("bad place '" + where + "'");
        g = g.with(Place::finite(p), r.rational_block(d));
      }
    } else if (kind == "real") {
      if (r.next("place") != "inf") throw ValidationError("real components are only allowed at inf");
      g = g.with_real_infinite(r.real_block(d));
    } else {
      throw ValidationError("unknown block '" + kind + "' (default, place p, place inf, real inf)");
    }
  }
  return g;
}

HermitianLattice load_gram(const std::string& path_or_name) {
  static const std::regex identity_name("I([0-9]+)");
  std::smatch m;
  if (!std::filesystem::exists(path_or_name) && std::regex_match(path_or_name, m, identity_name)) {
    const long d = std::stol(m[1].str());
    if (d < 1 || d > 64) throw ValidationError("bad identity rank in '" + path_or_name + "'");
    return HermitianLattice::unit(static_cast<std::size_t>(d));
  }
  return parse_gram_text(read_file(path_or_name));
}

AdelicGroupElement load_twist(const std::string& path) { return parse_twist_text(read_file(path)); }

}  // namespace heightkit
