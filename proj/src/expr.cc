#include <cctype>

#include "telescopes/telescope.hpp"

namespace telescopes {

namespace {

class Parser {
 public:
  Parser(const ModelPtr& model, std::string_view text) : model_(model), s_(text) {}

  LazyElement parse() {
    LazyElement g = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return g;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  LazyElement expr() {
    LazyElement g = factor();
    while (eat("*")) g = g * factor();
    return g;
  }

  LazyElement factor() {
    LazyElement g = atom();
    if (eat("^-1")) g = g.inverse();
    return g;
  }

  std::size_t number() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a level number");
    if (pos_ - start > 6) fail("level number too large");
    return std::stoul(std::string(s_.substr(start, pos_ - start)));
  }

  // Text up to the ')' closing the current atom, honouring nested
  // parentheses and brackets.
  std::string_view argument(std::size_t* at) {
    skip();
    *at = pos_;
    int depth = 0;
    std::size_t i = pos_;
    for (; i < s_.size(); ++i) {
      char c = s_[i];
      if (c == '(' || c == '[' || c == '{') ++depth;
      if (c == ')' || c == ']' || c == '}') {
        if (depth == 0) break;
        --depth;
      }
    }
    if (i == s_.size()) fail("unterminated atom");
    std::string_view arg = s_.substr(pos_, i - pos_);
    pos_ = i;
    return arg;
  }

  template <class F>
  auto guarded(std::size_t at, F&& f) {
    try {
      return f();
    } catch (const ParseError& e) {
      throw ParseError(e.what(), at);
    } catch (const PreconditionError& e) {
      throw ParseError(e.what(), at);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), at);
    } catch (const std::out_of_range& e) {
      throw ParseError(e.what(), at);
    }
  }

  LazyElement atom() {
    skip();
    if (eat("(")) {
      LazyElement g = expr();
      expect(")");
      return g;
    }
    if (eat("1")) return LazyElement(model_);
    std::size_t start = pos_;
    if (eat("Tm(")) fail("directed atoms cannot be parsed");
    if (eat("D(") || eat("F(")) {
      bool one_hot = s_[start] == 'F';
      std::size_t lvl = number();
      if (lvl < 1 || lvl > model_->max_level()) {
        pos_ = start;
        fail("level " + std::to_string(lvl) + " out of range");
      }
      expect(",");
      std::size_t at = 0;
      std::string_view arg = argument(&at);
      LevelElem w = guarded(at, [&] { return model_->parse_level(arg, lvl); });
      expect(")");
      return one_hot ? LazyElement::one_hot(model_, lvl, std::move(w))
                     : LazyElement::delta(model_, lvl, std::move(w));
    }
    if (eat("T(")) {
      std::size_t n = number();
      if (n < 1) {
        pos_ = start;
        fail("tilde start must be at least 1");
      }
      expect(",");
      std::size_t at = 0;
      std::string_view arg = argument(&at);
      BElem b = guarded(at, [&] { return model_->parse_b(arg); });
      expect(")");
      return LazyElement::tilde(model_, n, std::move(b));
    }
    if (eat("E")) return guarded(start, [&] { return LazyElement::epsilon(model_); });
    fail(pos_ < s_.size() ? "unexpected '" + std::string(1, s_[pos_]) + "'" : "unexpected end of input");
  }

  ModelPtr model_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

LazyElement parse_element(const ModelPtr& model, std::string_view text) {
  return Parser(model, text).parse();
}

std::string format_element(const LazyElement& g) {
  if (g.atoms().empty()) return "1";
  const TelescopeModel& m = g.model();
  std::string out;
  for (const Atom& a : g.atoms()) {
    if (!out.empty()) out += "*";
    const AtomData& d = *a.data;
    switch (d.kind) {
      case AtomKind::delta:
        out += "D(" + std::to_string(d.level) + "," + m.format_level(std::get<LevelElem>(d.payload), d.level) + ")";
        break;
      case AtomKind::one_hot:
        out += "F(" + std::to_string(d.level) + "," + m.format_level(std::get<LevelElem>(d.payload), d.level) + ")";
        break;
      case AtomKind::tilde:
        out += "T(" + std::to_string(d.level) + "," + m.format_b(std::get<BElem>(d.payload)) + ")";
        break;
      case AtomKind::directed:
        out += "Tm(" + std::to_string(d.depth) + "," + std::to_string(d.level) + "," +
               m.format_directed(std::get<DirectedElem>(d.payload)) + ")";
        break;
      case AtomKind::epsilon:
        out += "E";
        break;
    }
    if (a.inverse) out += "^-1";
  }
  return out;
}

}  // namespace telescopes
