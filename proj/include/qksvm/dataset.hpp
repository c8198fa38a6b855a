#pragma once

#include <array>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qksvm/errors.hpp"
#include "qksvm/rng.hpp"

namespace qksvm {

inline constexpr int kNumSymptoms = 13;
inline constexpr int kNumFeatures = 15;  // gender, age, 13 symptoms

inline constexpr std::array<std::string_view, kNumSymptoms> kSymptomNames = {
    "smoking",        "yellow_fingers",      "anxiety",
    "peer_pressure",  "chronic_disease",     "fatigue",
    "allergy",        "wheezing",            "alcohol_consuming",
    "coughing",       "shortness_of_breath", "swallowing_difficulty",
    "chest_pain"};

// Token dialects for the survey CSV. The public file encodes binaries as
// 2 (yes) / 1 (no) with a YES/NO label; the described form uses Yes/No.
enum class EncodingProfile { Paper, KaggleNumeric };

inline std::string to_string(EncodingProfile p) {
  return p == EncodingProfile::Paper ? "paper" : "kaggle_numeric";
}

struct RawRecord {
  bool gender_male = false;
  double age = 0.0;
  std::array<bool, kNumSymptoms> symptoms{};
  bool label_positive = false;
};

namespace detail {

inline std::string trim_upper(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out(s.substr(b, e - b));
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

inline bool parse_binary_token(const std::string& tok, EncodingProfile profile, int row,
                               std::string_view field) {
  if (profile == EncodingProfile::KaggleNumeric) {
    if (tok == "2") return true;
    if (tok == "1") return false;
  } else {
    if (tok == "YES") return true;
    if (tok == "NO") return false;
  }
  throw LoadError("row " + std::to_string(row) + ": unknown token '" + tok + "' in field '" +
                  std::string(field) + "'");
}

}  // namespace detail

// Schema: GENDER, AGE, 13 symptom columns, label. Header row required,
// columns positional, no missing values.
inline std::vector<RawRecord> load_csv(std::istream& in, EncodingProfile profile) {
  std::string line;
  if (!std::getline(in, line)) throw LoadError("empty file: expected a header row");
  const std::size_t expected = kNumFeatures + 1;
  if (detail::split_csv_line(line).size() != expected) {
    throw LoadError("header: expected " + std::to_string(expected) + " columns");
  }

  std::vector<RawRecord> records;
  int row = 1;  // header was row 1
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    const std::vector<std::string> raw = detail::split_csv_line(line);
    if (raw.size() != expected) {
      throw LoadError("row " + std::to_string(row) + ": expected " + std::to_string(expected) +
                      " fields, got " + std::to_string(raw.size()));
    }
    std::vector<std::string> f;
    f.reserve(raw.size());
    for (const std::string& s : raw) f.push_back(detail::trim_upper(s));
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (f[k].empty()) {
        throw LoadError("row " + std::to_string(row) + ": missing value in column " +
                        std::to_string(k + 1));
      }
    }

    RawRecord rec;
    if (f[0] == "M") rec.gender_male = true;
    else if (f[0] == "F") rec.gender_male = false;
    else throw LoadError("row " + std::to_string(row) + ": unknown gender token '" + f[0] + "'");

    try {
      std::size_t pos = 0;
      rec.age = std::stod(f[1], &pos);
      if (pos != f[1].size()) throw std::invalid_argument(f[1]);
    } catch (const std::exception&) {
      throw LoadError("row " + std::to_string(row) + ": non-numeric age '" + f[1] + "'");
    }
    if (!std::isfinite(rec.age)) {
      throw LoadError("row " + std::to_string(row) + ": non-finite age");
    }

    for (int s = 0; s < kNumSymptoms; ++s) {
      rec.symptoms[s] = detail::parse_binary_token(f[2 + s], profile, row, kSymptomNames[s]);
    }

    const std::string& lbl = f[expected - 1];
    if (lbl == "YES") rec.label_positive = true;
    else if (lbl == "NO") rec.label_positive = false;
    else throw LoadError("row " + std::to_string(row) + ": unknown label token '" + lbl + "'");

    records.push_back(rec);
  }
  if (records.empty()) throw LoadError("no data rows after the header");
  return records;
}

inline std::vector<RawRecord> load_csv(const std::string& path, EncodingProfile profile) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open '" + path + "'");
  return load_csv(in, profile);
}

// Age standardizer (population std, divisor N).
struct Scaler {
  double mean = 0.0;
  double stddev = 1.0;

  double standardize(double x) const { return (x - mean) / stddev; }
  double destandardize(double z) const { return z * stddev + mean; }
};

inline Scaler fit_scaler(const std::vector<double>& values) {
  if (values.size() < 2) throw ValidationError("scaler needs at least two values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  if (var <= 0.0) throw DegenerateScaleError("all values identical: standardization undefined");
  return {mean, std::sqrt(var)};
}

struct EncodedSample {
  std::vector<double> features;  // gender, age (standardized), symptoms; binaries in {0,1}
  int label = 0;                 // 1 positive, 0 negative
};

inline std::vector<EncodedSample> encode(const std::vector<RawRecord>& records,
                                         const Scaler& scaler) {
  std::vector<EncodedSample> out;
  out.reserve(records.size());
  for (const RawRecord& r : records) {
    EncodedSample s;
    s.features.reserve(kNumFeatures);
    s.features.push_back(r.gender_male ? 1.0 : 0.0);
    s.features.push_back(scaler.standardize(r.age));
    for (bool b : r.symptoms) s.features.push_back(b ? 1.0 : 0.0);
    s.label = r.label_positive ? 1 : 0;
    out.push_back(std::move(s));
  }
  return out;
}

// Balanced subsets: every subset holds all minority (negative) samples plus
// a disjoint block of positives of the same size. Train/test splits are
// filled in per subset by stratified_split.
struct SubsetPlan {
  struct Subset {
    std::vector<int> indices;        // negatives first, then the positive block
    std::vector<int> train_indices;  // filled by split_plan / stratified_split
    std::vector<int> test_indices;
  };
  std::vector<Subset> subsets;
  std::uint64_t seed = 0;
};

inline SubsetPlan make_subsets(const std::vector<EncodedSample>& samples, int count,
                               std::uint64_t seed) {
  if (count < 1) throw ValidationError("subset count must be >= 1");
  std::vector<int> negatives, positives;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    (samples[i].label == 1 ? positives : negatives).push_back(static_cast<int>(i));
  }
  if (negatives.empty() || positives.empty()) {
    throw ValidationError("both classes are required to build balanced subsets");
  }
  const std::size_t block = negatives.size();
  const std::size_t needed = static_cast<std::size_t>(count) * block;
  if (needed > positives.size()) {
    throw CapacityError("balanced subsets need " + std::to_string(needed) +
                        " positive samples, only " + std::to_string(positives.size()) +
                        " available");
  }

  SplitMix64 rng(derive_seed(seed, "subsets"));
  shuffle(positives, rng);

  SubsetPlan plan;
  plan.seed = seed;
  for (int c = 0; c < count; ++c) {
    SubsetPlan::Subset s;
    s.indices = negatives;
    std::vector<int> chosen(positives.begin() + static_cast<std::ptrdiff_t>(c * block),
                            positives.begin() + static_cast<std::ptrdiff_t>((c + 1) * block));
    std::sort(chosen.begin(), chosen.end());
    s.indices.insert(s.indices.end(), chosen.begin(), chosen.end());
    plan.subsets.push_back(std::move(s));
  }
  return plan;
}

namespace detail {

// Round half to even.
inline long long round_half_even(double v) {
  const double f = std::floor(v);
  const double frac = v - f;
  if (frac > 0.5) return static_cast<long long>(f) + 1;
  if (frac < 0.5) return static_cast<long long>(f);
  const long long lo = static_cast<long long>(f);
  return (lo % 2 == 0) ? lo : lo + 1;
}

}  // namespace detail

// Per-class seeded shuffle, round-half-even test count per class. Requires a
// balanced subset and a fraction that leaves no side empty.
inline std::pair<std::vector<int>, std::vector<int>> stratified_split(
    const std::vector<EncodedSample>& samples, const std::vector<int>& subset,
    double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ValidationError("test_fraction must be in (0, 1)");
  }
  std::vector<int> neg, pos;
  for (int idx : subset) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= samples.size()) {
      throw ValidationError("subset index out of range");
    }
    (samples[idx].label == 1 ? pos : neg).push_back(idx);
  }
  if (neg.size() != pos.size()) throw ValidationError("subset is not class-balanced");
  if (neg.empty()) throw ValidationError("subset is empty");

  std::vector<int> train, test;
  int class_tag = 0;
  for (std::vector<int>* cls : {&neg, &pos}) {
    SplitMix64 rng(derive_seed(seed, "split-class", static_cast<std::uint64_t>(class_tag++)));
    shuffle(*cls, rng);
    const long long k_test =
        detail::round_half_even(test_fraction * static_cast<double>(cls->size()));
    if (k_test < 1 || k_test >= static_cast<long long>(cls->size())) {
      throw ValidationError("test_fraction leaves an empty train or test class");
    }
    test.insert(test.end(), cls->begin(), cls->begin() + k_test);
    train.insert(train.end(), cls->begin() + k_test, cls->end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

// Convenience: subsets plus per-subset splits, seeds derived from `seed`.
inline SubsetPlan make_plan(const std::vector<EncodedSample>& samples, int count,
                            double test_fraction, std::uint64_t seed) {
  SubsetPlan plan = make_subsets(samples, count, seed);
  for (std::size_t i = 0; i < plan.subsets.size(); ++i) {
    auto [train, test] = stratified_split(samples, plan.subsets[i].indices, test_fraction,
                                          derive_seed(seed, "split", i));
    plan.subsets[i].train_indices = std::move(train);
    plan.subsets[i].test_indices = std::move(test);
  }
  return plan;
}

}  // namespace qksvm
