#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace nasalgan::corpus {

/// One phone label over the half-open sample range [start, end).
struct PhoneSegment {
    std::string label;
    std::size_t start = 0;
    std::size_t end = 0;

    friend bool operator==(const PhoneSegment&, const PhoneSegment&) = default;
};

/// A word span and the index range [first_phone, last_phone) of its phones.
struct WordSegment {
    std::string label;
    std::size_t start = 0;
    std::size_t end = 0;
    std::size_t first_phone = 0;
    std::size_t last_phone = 0;

    std::size_t phone_count() const noexcept { return last_phone - first_phone; }
};

struct UtteranceAlignment {
    std::string id;
    std::vector<PhoneSegment> phones;
    std::vector<WordSegment> words;
};

/// TIMIT `.phn`: lines `<start> <end> <label>` in sample offsets. Output is
/// sorted by start. Throws DataError naming the line on malformed input,
/// start >= end, or overlap.
std::vector<PhoneSegment> parse_phn(std::string_view text);

/// TIMIT `.wrd`: same line format, labels are orthographic words.
std::vector<PhoneSegment> parse_wrd(std::string_view text);

/// Attaches to each word the phones lying inside its span.
std::vector<WordSegment> group_words(const std::vector<PhoneSegment>& phones,
                                     const std::vector<PhoneSegment>& words);

/// Flattened forced-aligner export. Rows `utterance,word_index,phone,start_sec,end_sec`
/// (optional header row); an empty word_index marks a phone outside any word.
/// Times are rounded to samples at `sample_rate`. Utterances are returned in
/// first-appearance order.
std::vector<UtteranceAlignment> parse_alignment_csv(std::string_view text, int sample_rate);

}  // namespace nasalgan::corpus
