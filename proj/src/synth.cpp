#include "slidewin/synth.hpp"

#include "slidewin/error.hpp"
#include "slidewin/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <vector>

namespace slidewin {

Timeseries gen_random_walk(const RandomWalkConfig& cfg) {
  if (cfg.m < 1) throw Error(ErrorCode::InvalidArgument, "random walk needs m >= 1");
  RandomEngine rng = make_engine(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(cfg.m, 0.0);
  for (std::size_t t = 1; t < cfg.m; ++t) {
    double z;
    if (cfg.increments == Increment::Rademacher) {
      z = (rng() >> 63) != 0 ? 1.0 : -1.0;
    } else {
      z = normal(rng);
    }
    x[t] = x[t - 1] + z;
  }
  return Timeseries(std::move(x));
}

double noisy_sine_signal(const NoisySineConfig& cfg, std::size_t t) {
  return cfg.a + cfg.b * std::sin(2.0 * std::numbers::pi * (static_cast<double>(t) - cfg.c) /
                                  static_cast<double>(cfg.w));
}

NoisySine gen_noisy_sine(const NoisySineConfig& cfg) {
  if (cfg.p < 1 || cfg.w < 3) {
    throw Error(ErrorCode::InvalidArgument, "noisy sine needs p >= 1 and w >= 3");
  }
  if (!(cfg.noise_sigma >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "noise sigma must be >= 0");
  }
  const std::size_t m = cfg.length();
  std::vector<double> e(m, 0.0);
  if (cfg.noise_sigma > 0.0) {
    RandomEngine rng = make_engine(cfg.seed);
    std::normal_distribution<double> normal(0.0, cfg.noise_sigma);
    for (double& v : e) v = normal(rng);
    double mean = 0.0;
    for (double v : e) mean += v;
    mean /= static_cast<double>(m);
    for (double& v : e) v -= mean;
  }
  std::vector<double> x(m);
  for (std::size_t t = 0; t < m; ++t) x[t] = noisy_sine_signal(cfg, t) + e[t];
  return {Timeseries(std::move(x)), Timeseries(std::move(e))};
}

CbfDraw gen_cbf_draw(const CbfConfig& cfg) {
  if (cfg.length < 1) throw Error(ErrorCode::InvalidArgument, "CBF length must be >= 1");
  RandomEngine rng = make_engine(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> onset_dist(16, 32);
  std::uniform_int_distribution<std::size_t> span_dist(32, 96);

  CbfDraw draw{Timeseries(std::vector<double>(1, 0.0)), 0, 0, 0.0};
  draw.onset = onset_dist(rng);
  draw.offset = draw.onset + span_dist(rng);
  draw.amplitude = 6.0 + normal(rng);

  const double a = static_cast<double>(draw.onset);
  const double b = static_cast<double>(draw.offset);
  std::vector<double> x(cfg.length);
  for (std::size_t i = 0; i < cfg.length; ++i) {
    const std::size_t t = i + 1;
    const double td = static_cast<double>(t);
    double shape = 0.0;
    if (t >= draw.onset && t <= draw.offset) {
      switch (cfg.shape) {
        case CbfClass::Cylinder:
          shape = 1.0;
          break;
        case CbfClass::Bell:
          shape = (td - a) / (b - a);
          break;
        case CbfClass::Funnel:
          shape = (b - td) / (b - a);
          break;
      }
    }
    x[i] = draw.amplitude * shape + normal(rng);
  }
  draw.x = Timeseries(std::move(x));
  return draw;
}

Timeseries gen_cbf(const CbfConfig& cfg) { return gen_cbf_draw(cfg).x; }

Timeseries gen_cbf_concatenation(std::size_t draws, std::size_t length, std::uint64_t seed) {
  if (draws < 1) throw Error(ErrorCode::InvalidArgument, "need at least one CBF draw");
  constexpr CbfClass cycle[] = {CbfClass::Cylinder, CbfClass::Bell, CbfClass::Funnel};
  std::vector<double> out;
  out.reserve(draws * length);
  for (std::size_t i = 0; i < draws; ++i) {
    const Timeseries one = gen_cbf({cycle[i % 3], length, derive_seed(seed, i)});
    out.insert(out.end(), one.values().begin(), one.values().end());
  }
  return Timeseries(std::move(out));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

Timeseries load_csv(const std::filesystem::path& path, const ColumnSelector& column,
                    Transform transform) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw RowError(ErrorCode::ParseError, 0, path.string() + ": missing header row");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const std::vector<std::string> header = split_csv_line(line);

  std::size_t index = 0;
  if (const auto* name = std::get_if<std::string>(&column)) {
    auto it = std::find_if(header.begin(), header.end(),
                           [&](const std::string& h) { return trim(h) == *name; });
    if (it == header.end()) {
      throw RowError(ErrorCode::ParseError, 0, path.string() + ": no column named '" + *name + "'");
    }
    index = static_cast<std::size_t>(it - header.begin());
  } else {
    index = std::get<std::size_t>(column);
    if (index >= header.size()) {
      throw RowError(ErrorCode::ParseError, 0,
                     path.string() + ": column " + std::to_string(index) + " out of range");
    }
  }

  std::vector<double> values;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const std::vector<std::string> fields = split_csv_line(line);
    const std::string where = path.string() + " row " + std::to_string(row);
    if (index >= fields.size()) {
      throw RowError(ErrorCode::ParseError, row, where + ": missing column");
    }
    const std::string cell = trim(fields[index]);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || end != cell.data() + cell.size() || !std::isfinite(v)) {
      throw RowError(ErrorCode::ParseError, row, where + ": cannot parse '" + cell + "' as a finite number");
    }
    if (transform == Transform::Log) {
      if (v <= 0.0) {
        throw RowError(ErrorCode::NonPositiveLog, row,
                       where + ": log transform needs a positive value, got " + cell);
      }
      v = std::log(v);
    }
    values.push_back(v);
  }
  if (values.empty()) {
    throw RowError(ErrorCode::ParseError, 0, path.string() + ": no data rows");
  }
  return Timeseries(std::move(values));
}

}  // namespace slidewin
