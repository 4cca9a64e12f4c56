#include "ebsched/model/lexer.hpp"

#include <array>
#include <cctype>

#include "ebsched/error.hpp"

namespace ebsched::model {

namespace {

// Longest spellings first.
constexpr std::array<std::string_view, 30> kSymbols = {
    "|->", ":=", "::", ":|", "/=", "!=", "<=", ">=", "=>", "->", "[]", "..", "(", ")", "{",
    "}",   ",",  ":",  "=",  "<",  ">",  "+",  "-",  "*",  "'",  ";",  "?",  "|",  "!", "/"};

}  // namespace

std::vector<Token> tokenize(std::string_view text, int first_line, int first_column) {
  std::vector<Token> out;
  int line = first_line;
  int col = first_column;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < text.size() && text[i + 1] == '/')) {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '@') {
      std::size_t j = i + 1;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      t.kind = c == '@' ? Tok::Label : Tok::Ident;
      t.text = std::string(text.substr(c == '@' ? i + 1 : i, j - i - (c == '@' ? 1 : 0)));
      if (t.kind == Tok::Label && t.text.empty()) throw ParseError("empty label", line, col);
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Tok::Number;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (c == '"') {
      std::size_t j = i + 1;
      std::string s;
      while (j < text.size() && text[j] != '"') {
        if (text[j] == '\\' && j + 1 < text.size()) ++j;
        s += text[j++];
      }
      if (j >= text.size()) throw ParseError("unterminated string", line, col);
      t.kind = Tok::String;
      t.text = std::move(s);
      advance(j + 1 - i);
    } else {
      std::string_view rest = text.substr(i);
      bool found = false;
      for (auto sym : kSymbols) {
        if (rest.starts_with(sym)) {
          t.kind = Tok::Symbol;
          t.text = std::string(sym);
          advance(sym.size());
          found = true;
          break;
        }
      }
      if (!found) throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t k = std::min(pos_ + ahead, toks_.size() - 1);
  return toks_[k];
}

const Token& TokenStream::next() {
  const Token& t = toks_[pos_];
  if (pos_ + 1 < toks_.size()) ++pos_;
  return t;
}

bool TokenStream::is(std::string_view text) const {
  const Token& t = peek();
  return (t.kind == Tok::Symbol || t.kind == Tok::Ident) && t.text == text;
}

bool TokenStream::accept(std::string_view text) {
  if (!is(text)) return false;
  next();
  return true;
}

const Token& TokenStream::expect(std::string_view text) {
  if (!is(text)) fail("expected '" + std::string(text) + "'");
  return next();
}

std::string TokenStream::expect_ident(std::string_view what) {
  if (!is_ident()) fail("expected " + std::string(what));
  return next().text;
}

void TokenStream::fail(const std::string& msg) const { fail_at(peek(), msg); }

void TokenStream::fail_at(const Token& t, const std::string& msg) const {
  std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
  throw ParseError(msg + ", found " + found, t.line, t.column);
}

}  // namespace ebsched::model
