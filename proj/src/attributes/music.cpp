#include "arvae/attributes/music.hpp"

#include "arvae/numgrad/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace arvae::attributes {

namespace {

constexpr std::array<const char*, 12> kPitchClasses{"C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"};

Token parse_token(std::string_view text)
{
    if (text == "__") return Token::hold();
    if (text == "R" || text == "r") return Token::rest();
    int midi = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), midi);
    if (ec == std::errc{} && ptr == text.data() + text.size()) return Token::note(midi);
    return Token::note(parse_note_name(text));
}

} // namespace

std::string note_name(int midi)
{
    const int pc = ((midi % 12) + 12) % 12;
    const int octave = (midi - pc) / 12 - 1;
    return std::string(kPitchClasses[static_cast<std::size_t>(pc)]) + std::to_string(octave);
}

int parse_note_name(std::string_view name)
{
    static constexpr std::array<int, 7> kLetterOffset{9, 11, 0, 2, 4, 5, 7}; // A..G
    if (name.empty()) throw FormatError("empty note name");
    const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    if (letter < 'A' || letter > 'G') throw FormatError("bad note name '" + std::string(name) + "'");
    int pc = kLetterOffset[static_cast<std::size_t>(letter - 'A')];
    std::size_t pos = 1;
    while (pos < name.size() && (name[pos] == '#' || name[pos] == 'b')) {
        pc += name[pos] == '#' ? 1 : -1;
        ++pos;
    }
    int octave = 0;
    const auto [ptr, ec] = std::from_chars(name.data() + pos, name.data() + name.size(), octave);
    if (pos == name.size() || ec != std::errc{} || ptr != name.data() + name.size()) {
        throw FormatError("bad note name '" + std::string(name) + "'");
    }
    return (octave + 1) * 12 + pc;
}

Measure::Measure() { tokens_.fill(Token::rest()); }

Measure::Measure(std::array<Token, kMeasureLength> tokens) : tokens_(tokens) { validate(tokens_); }

void Measure::validate(const std::array<Token, kMeasureLength>& tokens)
{
    bool sounding = false;
    for (std::size_t t = 0; t < kMeasureLength; ++t) {
        switch (tokens[t].kind) {
        case TokenKind::Note: sounding = true; break;
        case TokenKind::Rest: sounding = false; break;
        case TokenKind::Continuation:
            if (!sounding) {
                throw ContractError("continuation at tick " + std::to_string(t) + " has no sounding note");
            }
            break;
        }
    }
}

Measure Measure::sanitized(std::array<Token, kMeasureLength> tokens)
{
    bool sounding = false;
    for (auto& token : tokens) {
        if (token.kind == TokenKind::Note) sounding = true;
        else if (token.kind == TokenKind::Rest) sounding = false;
        else if (!sounding) token = Token::rest();
    }
    return Measure(tokens);
}

Measure Measure::parse(std::string_view line)
{
    std::istringstream in{std::string(line)};
    std::array<Token, kMeasureLength> tokens;
    std::string word;
    std::size_t count = 0;
    while (in >> word) {
        if (count == kMeasureLength) throw FormatError("measure has more than 24 tokens");
        tokens[count++] = parse_token(word);
    }
    if (count != kMeasureLength) {
        throw FormatError("measure has " + std::to_string(count) + " tokens, expected 24");
    }
    return Measure(tokens);
}

std::string Measure::to_string() const
{
    std::string out;
    for (std::size_t t = 0; t < kMeasureLength; ++t) {
        if (t > 0) out += ' ';
        switch (tokens_[t].kind) {
        case TokenKind::Note: out += note_name(tokens_[t].midi); break;
        case TokenKind::Continuation: out += "__"; break;
        case TokenKind::Rest: out += "R"; break;
        }
    }
    return out;
}

Measure Measure::transposed(int semitones) const
{
    auto tokens = tokens_;
    for (auto& token : tokens) {
        if (token.is_onset()) token.midi += semitones;
    }
    return Measure(tokens);
}

TokenVocabulary::TokenVocabulary(int low, int high) : low_(low), high_(high)
{
    if (high < low) throw ContractError("vocabulary pitch range is empty");
}

std::size_t TokenVocabulary::id(const Token& token) const
{
    switch (token.kind) {
    case TokenKind::Continuation: return continuation_id();
    case TokenKind::Rest: return rest_id();
    case TokenKind::Note:
        if (!contains(token.midi)) {
            throw ContractError("MIDI pitch " + std::to_string(token.midi) + " outside vocabulary");
        }
        return static_cast<std::size_t>(token.midi - low_);
    }
    return rest_id();
}

Token TokenVocabulary::token(std::size_t id) const
{
    if (id == continuation_id()) return Token::hold();
    if (id == rest_id()) return Token::rest();
    if (id > rest_id()) throw ContractError("token id " + std::to_string(id) + " outside vocabulary");
    return Token::note(low_ + static_cast<int>(id));
}

ComplexityWeights ComplexityWeights::standard()
{
    std::array<double, kMeasureLength> w{};
    for (std::size_t t = 0; t < kMeasureLength; ++t) {
        if (t == 0) w[t] = 1;
        else if (t % 12 == 0) w[t] = 2;
        else if (t % 6 == 0) w[t] = 3;
        else if (t % 3 == 0) w[t] = 4;
        else if (t % 2 == 0) w[t] = 5;
        else w[t] = 6;
    }
    return ComplexityWeights(w);
}

ComplexityWeights::ComplexityWeights(std::array<double, kMeasureLength> weights) : weights_(weights)
{
    for (double v : weights_) {
        if (!(v >= 0.0)) throw ContractError("complexity weights must be non-negative");
    }
    if (!(total() > 0.0)) throw ContractError("complexity weights must not all be zero");
}

double ComplexityWeights::total() const
{
    double s = 0.0;
    for (double v : weights_) s += v;
    return s;
}

double rhythmic_complexity(const Measure& m, const ComplexityWeights& w)
{
    double weighted = 0.0;
    for (std::size_t t = 0; t < kMeasureLength; ++t) {
        if (m[t].is_onset()) weighted += w[t];
    }
    return weighted / w.total();
}

double pitch_range(const Measure& m, const MusicAttributeConfig& config)
{
    int lo = 0;
    int hi = 0;
    bool any = false;
    for (const Token& token : m.tokens()) {
        int midi = 0;
        if (token.is_onset()) midi = token.midi;
        else if (!config.literal_pitch_range) continue;
        if (!any) lo = hi = midi;
        lo = std::min(lo, midi);
        hi = std::max(hi, midi);
        any = true;
    }
    if (!any) return 0.0;
    return std::clamp(static_cast<double>(hi - lo) / config.range, 0.0, 1.0);
}

double note_density(const Measure& m)
{
    std::size_t onsets = 0;
    for (const Token& token : m.tokens()) onsets += token.is_onset() ? 1 : 0;
    return static_cast<double>(onsets) / static_cast<double>(kMeasureLength);
}

double contour(const Measure& m, const MusicAttributeConfig& config)
{
    double total = 0.0;
    if (config.literal_contour) {
        auto midi = [&](std::size_t t) { return m[t].is_onset() ? m[t].midi : 0; };
        for (std::size_t t = 0; t + 1 < kMeasureLength; ++t) total += midi(t + 1) - midi(t);
        return total / config.range;
    }
    bool have_previous = false;
    int previous = 0;
    for (const Token& token : m.tokens()) {
        if (!token.is_onset()) continue;
        if (have_previous) total += token.midi - previous;
        previous = token.midi;
        have_previous = true;
    }
    return total / config.range;
}

double music_attribute(std::string_view name, const Measure& m, const MusicAttributeConfig& config)
{
    if (name == "rhy_complexity") return rhythmic_complexity(m);
    if (name == "pitch_range") return pitch_range(m, config);
    if (name == "note_density") return note_density(m);
    if (name == "contour") return contour(m, config);
    throw ContractError("unknown music attribute '" + std::string(name) + "'");
}

} // namespace arvae::attributes
