// Copyright 2026 The popekit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POPE_TESTS_SUPPORT_CHAIR_REFERENCE_HPP_
#define POPE_TESTS_SUPPORT_CHAIR_REFERENCE_HPP_

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace pope::testing {

// Brute-force caption-hallucination reference, written before and kept
// independent of the library implementation. Everything works on plain
// strings: captions are scanned token window by token window (longest
// window first, trailing-'s' retry on the last word), mentions are
// deduplicated per caption and compared against ground-truth name sets.

struct RefCaption {
  std::string image_id;
  std::string text;
};

struct RefChairResult {
  long mentions = 0;
  long hallucinated_mentions = 0;
  long captions = 0;
  long hallucinated_captions = 0;
  long words = 0;
  bool ratios_defined = false;
  double chair_i = 0.0;
  double chair_s = 0.0;
  double avg_len = 0.0;
};

inline std::vector<std::string> ref_words(const std::string& text) {
  std::vector<std::string> words;
  std::string word;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    const bool alnum = i < text.size() && std::isalnum(static_cast<unsigned char>(text[i])) != 0;
    if (alnum) {
      word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
    } else if (!word.empty()) {
      words.push_back(word);
      word.clear();
    }
  }
  return words;
}

inline std::set<std::string> ref_mentions(const std::string& caption,
                                          const std::map<std::string, std::string>& phrase_to_name,
                                          std::size_t longest_phrase_words) {
  const std::vector<std::string> words = ref_words(caption);
  std::set<std::string> mentioned;
  std::size_t i = 0;
  while (i < words.size()) {
    bool matched = false;
    std::size_t window = longest_phrase_words;
    if (window > words.size() - i) window = words.size() - i;
    for (; window >= 1 && !matched; --window) {
      std::string phrase;
      for (std::size_t w = 0; w < window; ++w) {
        if (w > 0) phrase += " ";
        phrase += words[i + w];
      }
      auto hit = phrase_to_name.find(phrase);
      if (hit == phrase_to_name.end() && phrase.size() >= 2 && phrase.back() == 's') {
        hit = phrase_to_name.find(phrase.substr(0, phrase.size() - 1));
      }
      if (hit != phrase_to_name.end()) {
        mentioned.insert(hit->second);
        i += window;
        matched = true;
      }
    }
    if (!matched) i += 1;
  }
  return mentioned;
}

// `lexicon` maps surface phrase -> canonical name; identity entries for the
// whole vocabulary are added here, mirroring the documented file contract.
inline RefChairResult ref_chair(const std::vector<RefCaption>& captions,
                                const std::map<std::string, std::set<std::string>>& ground_truth,
                                const std::vector<std::string>& vocabulary,
                                const std::map<std::string, std::string>& lexicon) {
  std::map<std::string, std::string> phrases = lexicon;
  for (const std::string& name : vocabulary) phrases[name] = name;
  std::size_t longest = 1;
  for (const auto& [phrase, name] : phrases) {
    const std::size_t words = ref_words(phrase).size();
    if (words > longest) longest = words;
  }

  RefChairResult result;
  for (const RefCaption& caption : captions) {
    const std::set<std::string> mentioned = ref_mentions(caption.text, phrases, longest);
    const std::set<std::string>& truth = ground_truth.at(caption.image_id);
    long hallucinated_here = 0;
    for (const std::string& name : mentioned) {
      if (truth.find(name) == truth.end()) ++hallucinated_here;
    }
    result.captions += 1;
    result.mentions += static_cast<long>(mentioned.size());
    result.hallucinated_mentions += hallucinated_here;
    if (hallucinated_here > 0) result.hallucinated_captions += 1;

    long words_in_caption = 0;
    bool inside = false;
    for (char c : caption.text) {
      const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
      if (!space && !inside) ++words_in_caption;
      inside = !space;
    }
    result.words += words_in_caption;
  }

  if (result.mentions > 0 && result.captions > 0) {
    result.ratios_defined = true;
    result.chair_i = static_cast<double>(result.hallucinated_mentions) /
                     static_cast<double>(result.mentions);
    result.chair_s = static_cast<double>(result.hallucinated_captions) /
                     static_cast<double>(result.captions);
    result.avg_len = static_cast<double>(result.words) / static_cast<double>(result.captions);
  }
  return result;
}

}  // namespace pope::testing

#endif  // POPE_TESTS_SUPPORT_CHAIR_REFERENCE_HPP_
