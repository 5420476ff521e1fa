#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace arvae::attributes {

inline constexpr std::size_t kMeasureLength = 24;

enum class TokenKind { Note, Continuation, Rest };

struct Token {
    TokenKind kind = TokenKind::Rest;
    int midi = 0; // meaningful for notes only

    static Token note(int midi) { return {TokenKind::Note, midi}; }
    static Token hold() { return {TokenKind::Continuation, 0}; }
    static Token rest() { return {TokenKind::Rest, 0}; }

    bool is_onset() const { return kind == TokenKind::Note; }
    bool operator==(const Token&) const = default;
};

/// One monophonic measure of 24 ticks (4 beats x 6 ticks).
class Measure {
public:
    Measure();
    explicit Measure(std::array<Token, kMeasureLength> tokens);

    /// Parses 24 whitespace-separated tokens: note names ("C4", "F#3", "Eb5"),
    /// MIDI integers, "__" for continuation, "R" for rest.
    static Measure parse(std::string_view line);
    /// Validates the invariant and throws on a continuation after a rest.
    static void validate(const std::array<Token, kMeasureLength>& tokens);
    /// Replaces continuations that have no sounding note with rests.
    static Measure sanitized(std::array<Token, kMeasureLength> tokens);

    const Token& operator[](std::size_t t) const { return tokens_[t]; }
    const std::array<Token, kMeasureLength>& tokens() const { return tokens_; }

    std::string to_string() const;
    Measure transposed(int semitones) const;

    bool operator==(const Measure&) const = default;

private:
    std::array<Token, kMeasureLength> tokens_;
};

std::string note_name(int midi);
int parse_note_name(std::string_view name);

/// Dense ids: notes low..high map to 0..(high-low), then continuation, then rest.
class TokenVocabulary {
public:
    TokenVocabulary(int low = 48, int high = 84);

    int low() const { return low_; }
    int high() const { return high_; }
    std::size_t size() const { return static_cast<std::size_t>(high_ - low_ + 1) + 2; }
    std::size_t continuation_id() const { return size() - 2; }
    std::size_t rest_id() const { return size() - 1; }

    bool contains(int midi) const { return midi >= low_ && midi <= high_; }
    std::size_t id(const Token& token) const;
    Token token(std::size_t id) const;

    bool operator==(const TokenVocabulary&) const = default;

private:
    int low_;
    int high_;
};

/// Metrical complexity coefficients per tick.
class ComplexityWeights {
public:
    /// 1 on the downbeat, 2 on the half-measure, 3 on the remaining beats,
    /// then 4, 5, 6 for successively weaker subdivisions.
    static ComplexityWeights standard();
    explicit ComplexityWeights(std::array<double, kMeasureLength> weights);

    double operator[](std::size_t t) const { return weights_[t]; }
    double total() const;

private:
    std::array<double, kMeasureLength> weights_;
};

struct MusicAttributeConfig {
    double range = 36.0;                // R, in semitones
    bool literal_contour = false;       // sum over all adjacent tokens with MIDI 0 for non-notes
    bool literal_pitch_range = false;   // max/min over all tokens with MIDI 0 for non-notes
};

double rhythmic_complexity(const Measure& m, const ComplexityWeights& w = ComplexityWeights::standard());
double pitch_range(const Measure& m, const MusicAttributeConfig& config = {});
double note_density(const Measure& m);
double contour(const Measure& m, const MusicAttributeConfig& config = {});

inline constexpr std::array<std::string_view, 4> kMusicAttributeNames{"rhy_complexity", "pitch_range",
                                                                       "note_density", "contour"};

/// Value of a named music attribute (one of kMusicAttributeNames).
double music_attribute(std::string_view name, const Measure& m, const MusicAttributeConfig& config = {});

} // namespace arvae::attributes
