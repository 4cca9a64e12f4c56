#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ebsched::model {

enum class Tok {
  Ident,
  Number,
  String,
  Symbol,  // punctuation and operators, text holds the spelling
  Label,   // @name
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

/// Splits model and schedule text into tokens. Comments run from "//" or "#"
/// to the end of the line.
std::vector<Token> tokenize(std::string_view text, int first_line = 1, int first_column = 1);

/// Cursor over a token vector with the helpers every recursive-descent parser
/// here needs.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == Tok::End; }

  bool is(std::string_view text) const;
  bool is_ident() const { return peek().kind == Tok::Ident; }
  /// Consumes the token if it spells `text`.
  bool accept(std::string_view text);
  const Token& expect(std::string_view text);
  std::string expect_ident(std::string_view what = "identifier");

  [[noreturn]] void fail(const std::string& msg) const;
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const;

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace ebsched::model
