#include "nasalgan/corpus/alignment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "nasalgan/error.hpp"

namespace nasalgan::corpus {
namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    return lines;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        const auto b = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > b) out.push_back(s.substr(b, i - b));
    }
    return out;
}

std::vector<std::string_view> split_csv(std::string_view s) {
    std::vector<std::string_view> out;
    for (;;) {
        const auto c = s.find(',');
        auto f = s.substr(0, c);
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.remove_suffix(1);
        out.push_back(f);
        if (c == std::string_view::npos) break;
        s.remove_prefix(c + 1);
    }
    return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string at_line(std::size_t n) { return "line " + std::to_string(n) + ": "; }

std::vector<PhoneSegment> parse_offsets(std::string_view text, std::string_view what) {
    std::vector<std::pair<PhoneSegment, std::size_t>> segs;
    std::size_t line_no = 0;
    for (auto line : split_lines(text)) {
        ++line_no;
        const auto f = split_ws(line);
        if (f.empty()) continue;
        if (f.size() != 3)
            throw DataError(std::string(what) + " " + at_line(line_no) +
                            "expected '<start> <end> <label>'");
        const auto start = parse_number<std::size_t>(f[0]);
        const auto end = parse_number<std::size_t>(f[1]);
        if (!start || !end)
            throw DataError(std::string(what) + " " + at_line(line_no) + "non-integer sample offset");
        if (*start >= *end)
            throw DataError(std::string(what) + " " + at_line(line_no) + "start " +
                            std::to_string(*start) + " is not before end " + std::to_string(*end));
        segs.push_back({PhoneSegment{std::string(f[2]), *start, *end}, line_no});
    }
    std::stable_sort(segs.begin(), segs.end(),
                     [](const auto& a, const auto& b) { return a.first.start < b.first.start; });
    std::vector<PhoneSegment> out;
    out.reserve(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (i > 0 && segs[i].first.start < segs[i - 1].first.end)
            throw DataError(std::string(what) + " " + at_line(segs[i].second) + "segment '" +
                            segs[i].first.label + "' overlaps the previous segment");
        out.push_back(std::move(segs[i].first));
    }
    return out;
}

}  // namespace

std::vector<PhoneSegment> parse_phn(std::string_view text) { return parse_offsets(text, "phn"); }

std::vector<PhoneSegment> parse_wrd(std::string_view text) { return parse_offsets(text, "wrd"); }

std::vector<WordSegment> group_words(const std::vector<PhoneSegment>& phones,
                                     const std::vector<PhoneSegment>& words) {
    std::vector<WordSegment> out;
    std::size_t p = 0;
    for (const auto& w : words) {
        while (p < phones.size() && phones[p].start < w.start) ++p;
        WordSegment ws{w.label, w.start, w.end, p, p};
        while (p < phones.size() && phones[p].end <= w.end) ++p;
        ws.last_phone = p;
        out.push_back(ws);
    }
    return out;
}

std::vector<UtteranceAlignment> parse_alignment_csv(std::string_view text, int sample_rate) {
    if (sample_rate <= 0) throw UsageError("parse_alignment_csv: sample rate must be positive");
    struct Row {
        std::string word;
        PhoneSegment phone;
        std::size_t line;
    };
    std::vector<std::string> order;
    std::map<std::string, std::vector<Row>> rows;

    std::size_t line_no = 0;
    for (auto line : split_lines(text)) {
        ++line_no;
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
        const auto f = split_csv(line);
        if (line_no == 1 && !f.empty() && f[0] == "utterance") continue;
        if (f.size() != 5)
            throw DataError("alignment " + at_line(line_no) +
                            "expected 'utterance,word_index,phone,start_sec,end_sec'");
        const auto t0 = parse_number<double>(f[3]);
        const auto t1 = parse_number<double>(f[4]);
        if (!t0 || !t1 || *t0 < 0.0)
            throw DataError("alignment " + at_line(line_no) + "bad time value");
        if (*t1 < *t0)
            throw DataError("alignment " + at_line(line_no) + "end time precedes start time");
        const auto s0 = static_cast<std::size_t>(std::llround(*t0 * sample_rate));
        const auto s1 = static_cast<std::size_t>(std::llround(*t1 * sample_rate));
        if (s1 <= s0)
            throw DataError("alignment " + at_line(line_no) + "phone shorter than one sample");
        std::string utt(f[0]);
        if (!rows.contains(utt)) order.push_back(utt);
        rows[utt].push_back(Row{std::string(f[1]), PhoneSegment{std::string(f[2]), s0, s1}, line_no});
    }

    std::vector<UtteranceAlignment> out;
    for (const auto& id : order) {
        UtteranceAlignment u;
        u.id = id;
        const auto& rs = rows[id];
        for (std::size_t i = 0; i < rs.size(); ++i) {
            const auto& r = rs[i];
            if (i > 0 && r.phone.start < rs[i - 1].phone.end)
                throw DataError("alignment " + at_line(r.line) + "times are not monotone within utterance '" +
                                id + "'");
            if (!r.word.empty()) {
                if (u.words.empty() || u.words.back().label != r.word ||
                    u.words.back().last_phone != u.phones.size()) {
                    for (const auto& w : u.words)
                        if (w.label == r.word)
                            throw DataError("alignment " + at_line(r.line) + "word index '" + r.word +
                                            "' is not contiguous in utterance '" + id + "'");
                    u.words.push_back(WordSegment{r.word, r.phone.start, r.phone.end, u.phones.size(),
                                                  u.phones.size()});
                }
                u.words.back().end = r.phone.end;
                u.words.back().last_phone = u.phones.size() + 1;
            }
            u.phones.push_back(r.phone);
        }
        out.push_back(std::move(u));
    }
    return out;
}

}  // namespace nasalgan::corpus
