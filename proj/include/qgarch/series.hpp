#ifndef QGARCH_SERIES_HPP
#define QGARCH_SERIES_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qgarch/params.hpp"

namespace qgarch {

/// Immutable observation set y_1..y_n for one inference run.
class SeriesData {
 public:
  // Throws std::invalid_argument on empty input or non-finite values.
  explicit SeriesData(std::vector<double> y);

  [[nodiscard]] const std::vector<double>& y() const { return y_; }
  [[nodiscard]] std::size_t n() const { return y_.size(); }

  // Unbiased sample variance; requires n >= 2.
  [[nodiscard]] double sample_variance() const;

  // Headerless single-column CSV, one observation per line.
  static SeriesData load_csv(const std::filesystem::path& file);
  void save_csv(const std::filesystem::path& file) const;

  // Canonical CSV bytes (what save_csv writes); basis of the data hash.
  [[nodiscard]] std::string to_csv() const;
  [[nodiscard]] std::uint64_t hash() const;

 private:
  std::vector<double> y_;
};

struct SeriesProvenance {
  std::uint64_t seed = 0;
  QgarchParams params;
  std::size_t burn_in = 0;
};

// JSON form {"y":[...], "meta":{"seed":..., "params":{...}}}.
void save_series_json(const SeriesData& series, const SeriesProvenance& meta,
                      const std::filesystem::path& file);
SeriesData load_series_json(const std::filesystem::path& file);

/// Conditional-variance path sigma_1^2..sigma_n^2. The recursion is total,
/// so a path may contain non-positive elements; such a path is inadmissible
/// for the likelihood and callers must check admissible() before using it.
struct VariancePath {
  std::vector<double> sigma2;

  [[nodiscard]] bool admissible() const {
    for (double s : sigma2)
      if (!(s > 0.0)) return false;
    return true;
  }
};

}  // namespace qgarch

#endif
