#include <cctype>
#include <map>

#include "dip/message.hpp"

namespace dip::msg {

namespace {

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '\'';
}

// Token-wise rewrite preserving all delimiters.
std::string rewrite_words(
    const std::string& text,
    const std::map<std::string, std::string>& replacements) {
  std::string out;
  size_t i = 0;
  while (i < text.size()) {
    if (!word_char(text[i])) {
      out += text[i++];
      continue;
    }
    size_t j = i;
    while (j < text.size() && word_char(text[j])) ++j;
    std::string word = text.substr(i, j - i);
    auto it = replacements.find(word);
    out += it == replacements.end() ? word : it->second;
    i = j;
  }
  return out;
}

bool all_upper(const std::string& w) {
  for (char c : w)
    if (!std::isupper(static_cast<unsigned char>(c))) return false;
  return !w.empty();
}

}  // namespace

std::string preprocess(const Map& map, const std::string& text,
                       const MessageContext& ctx) {
  const std::string& me = power_name(ctx.sender);
  const std::string& them = power_name(ctx.recipient);

  // Contractions first so the pronoun pass sees clean words.
  std::string t = rewrite_words(text, {
      {"I'm", "I am"},     {"I'll", "I will"},   {"I've", "I have"},
      {"you're", "you are"}, {"You're", "You are"},
      {"you'll", "you will"}, {"You'll", "You will"},
      {"we're", "we are"}, {"We're", "We are"},
  });

  t = rewrite_words(t, {
      {"I", me},           {"me", me},           {"we", me},
      {"We", me},          {"us", me},
      {"my", me + "'s"},   {"My", me + "'s"},    {"mine", me + "'s"},
      {"our", me + "'s"},  {"Our", me + "'s"},
      {"you", them},       {"You", them},
      {"your", them + "'s"}, {"Your", them + "'s"}, {"yours", them + "'s"},
  });

  // Province abbreviations: bare three-letter upper-case codes plus the
  // conventional "StP" alias.
  std::string out;
  size_t i = 0;
  while (i < t.size()) {
    if (!word_char(t[i])) {
      out += t[i++];
      continue;
    }
    size_t j = i;
    while (j < t.size() && word_char(t[j])) ++j;
    std::string word = t.substr(i, j - i);
    if (word == "StP") {
      out += map.full_name("STP");
    } else if (word.size() == 3 && all_upper(word)) {
      auto code = map.resolve_name(word);
      out += code ? map.full_name(*code) : word;
    } else {
      out += word;
    }
    i = j;
  }
  return out;
}

}  // namespace dip::msg
