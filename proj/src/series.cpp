#include "qgarch/series.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qgarch/io_util.hpp"
#include "qgarch/rng.hpp"

namespace qgarch {

SeriesData::SeriesData(std::vector<double> y) : y_(std::move(y)) {
  if (y_.empty()) throw std::invalid_argument("SeriesData: empty series");
  for (double v : y_) {
    if (!std::isfinite(v))
      throw std::invalid_argument("SeriesData: non-finite observation");
  }
}

double SeriesData::sample_variance() const {
  if (y_.size() < 2)
    throw std::invalid_argument("sample_variance: need at least 2 observations");
  double mean = 0.0;
  for (double v : y_) mean += v;
  mean /= static_cast<double>(y_.size());
  double ss = 0.0;
  for (double v : y_) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(y_.size() - 1);
}

SeriesData SeriesData::load_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open data file: " + file.string());
  std::vector<double> y;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0;
    double v = std::stod(line, &pos);
    y.push_back(v);
  }
  return SeriesData(std::move(y));
}

std::string SeriesData::to_csv() const {
  std::string out;
  out.reserve(y_.size() * 20);
  for (double v : y_) {
    out += format_double(v);
    out += '\n';
  }
  return out;
}

void SeriesData::save_csv(const std::filesystem::path& file) const {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write data file: " + file.string());
  out << to_csv();
}

std::uint64_t SeriesData::hash() const { return fnv1a64(to_csv()); }

void save_series_json(const SeriesData& series, const SeriesProvenance& meta,
                      const std::filesystem::path& file) {
  nlohmann::json j;
  j["y"] = series.y();
  j["meta"] = {{"seed", meta.seed},
               {"burn_in", meta.burn_in},
               {"params",
                {{"alpha", meta.params.alpha},
                 {"beta", meta.params.beta},
                 {"omega", meta.params.omega},
                 {"gamma", meta.params.gamma}}}};
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << j.dump(2) << '\n';
}

SeriesData load_series_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  nlohmann::json j = nlohmann::json::parse(in);
  return SeriesData(j.at("y").get<std::vector<double>>());
}

}  // namespace qgarch
