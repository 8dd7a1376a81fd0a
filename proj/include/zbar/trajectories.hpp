#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "zbar/measures.hpp"
#include "zbar/random.hpp"
#include "zbar/state_space.hpp"

namespace zbar {

double path_prob(const Word& w, const TransitionProfile& profile);
double log_path_prob(const Word& w, const TransitionProfile& profile);

struct UpDown {
    std::int64_t up = 0;
    std::int64_t down = 0;
};
UpDown up_down_counts(const Word& w);

// a . b; either may be empty, adjacency is checked at the junction.
Word concat(const Word& a, const Word& b);

Word connector_xi(int sigma, std::int64_t k, std::int64_t R);
Word connector_chi(int sigma, std::int64_t R);

struct TypicalTimes {
    std::int64_t minus;
    std::int64_t zero;
    std::int64_t plus;
    std::int64_t at(int sigma) const { return sigma < 0 ? minus : (sigma > 0 ? plus : zero); }
};
TypicalTimes typical_times(const MeasureZbar& mu, double epsilon, std::int64_t n);

enum class CheckMode { strict, permissive };

// Failed hypotheses either throw (strict) or are collected in warnings (permissive).
class AssumptionError : public DomainError {
public:
    using DomainError::DomainError;
};

struct Construction {
    TransitionProfile profile;
    MeasureZbar mu;
    double epsilon;
    std::int64_t R;
    std::int64_t n;
    CheckMode mode = CheckMode::strict;
};

std::vector<std::string> typical_assumption_failures(const Construction& c);
std::vector<std::string> stitch_assumption_failures(const Construction& c, const Word& w);

struct TypicalComponents {
    Word central;
    Word excursion;
    Word meander;
};

struct TypicalWord {
    Word word;
    std::int64_t connector_letters = 0;  // |xi| + |chi| + |b|
    std::vector<std::string> warnings;
};

TypicalWord build_typical(int sigma, const TypicalComponents& v, const Construction& c);

bool is_excursion(const Word& w, int sigma, std::int64_t R);
bool is_meander(const Word& w, int sigma, std::int64_t R);

TypicalComponents sample_typical_components(int sigma, const Construction& c, CounterStream& rng);

struct CutSequence {
    std::vector<std::int64_t> times;  // 1-indexed, times[0] = 1
    std::vector<int> regions;
    std::int64_t L = 0;
    std::int64_t n = 0;
    std::array<std::vector<std::int64_t>, 3> J;  // indexed by sigma + 1; entries are 1-indexed cut numbers

    const std::vector<std::int64_t>& index_set(int sigma) const { return J[static_cast<std::size_t>(sigma + 1)]; }
};

struct CutDecomposition {
    CutSequence cuts;
    std::array<std::vector<Word>, 3> subwords;  // u^{h,sigma}, indexed by sigma + 1

    const std::vector<Word>& of(int sigma) const { return subwords[static_cast<std::size_t>(sigma + 1)]; }
};

CutDecomposition cut_sequence(const Word& w, std::int64_t R);

std::int64_t stitched_length(const MeasureZbar& mu, int sigma, double epsilon, std::int64_t n);

struct StitchedWord {
    Word word;
    std::int64_t padding = 0;  // |b^sigma|
    std::vector<std::string> warnings;
};

StitchedWord stitch(const Word& w, int sigma, const Construction& c);

struct CutData {
    std::vector<std::int64_t> times;
    std::vector<int> regions;
    std::int64_t n = 0;
};

CutData encode_cuts(const Word& w, std::int64_t R);
Word reconstruct(const std::array<Word, 3>& stitched, const CutData& cuts);

}  // namespace zbar
