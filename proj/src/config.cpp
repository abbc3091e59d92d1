#include "slidewin/config.hpp"

#include "slidewin/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace slidewin {

namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

template <typename T>
T parse_integer(const std::string& key, const std::string& raw) {
  T value{};
  const auto [end, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (raw.empty() || ec != std::errc() || end != raw.data() + raw.size()) {
    throw Error(ErrorCode::Config, "config key '" + key + "': expected a non-negative integer, got '" + raw + "'");
  }
  return value;
}

double parse_double(const std::string& key, const std::string& raw) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (raw.empty() || ec != std::errc() || end != raw.data() + raw.size()) {
    throw Error(ErrorCode::Config, "config key '" + key + "': expected a number, got '" + raw + "'");
  }
  return value;
}

std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> items;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first != std::string::npos) items.push_back(item.substr(first, last - first + 1));
  }
  return items;
}

void flatten(const boost::property_tree::ptree& tree, Config& out) {
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw Error(ErrorCode::Config, "config key '" + section + "' must live inside a [section]");
    }
    for (const auto& [key, leaf] : body) out.set(section + "." + key, leaf.get_value<std::string>());
  }
}

}  // namespace

Config Config::parse_ini(std::string_view text) {
  std::istringstream in{std::string(text)};
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorCode::Config, std::string("malformed config: ") + e.what());
  }
  Config out;
  flatten(tree, out);
  return out;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();

  if (path.extension() == ".json") {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Config, "malformed JSON config " + path.string() + ": " + e.what());
    }
    // A report embeds its resolved configuration under "config".
    const nlohmann::json& body = doc.contains("config") ? doc["config"] : doc;
    Config out;
    for (const auto& [section, entries] : body.items()) {
      if (!entries.is_object()) {
        throw Error(ErrorCode::Config, "config section '" + section + "' must be an object");
      }
      for (const auto& [key, value] : entries.items()) {
        out.set(section + "." + key, value.is_string() ? value.get<std::string>() : value.dump());
      }
    }
    return out;
  }
  return parse_ini(buffer.str());
}

void Config::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  const std::string key(assignment.substr(0, eq));
  if (eq == std::string_view::npos || key.find('.') == std::string::npos) {
    throw Error(ErrorCode::Config,
                "override '" + std::string(assignment) + "' must look like section.key=value");
  }
  set(key, std::string(assignment.substr(eq + 1)));
}

std::string Config::text(const std::string& key, const std::string& fallback) {
  auto [it, inserted] = values_.try_emplace(key, fallback);
  return it->second;
}

double Config::number(const std::string& key, double fallback) {
  auto [it, inserted] = values_.try_emplace(key, format_number(fallback));
  return parse_double(key, it->second);
}

std::size_t Config::count(const std::string& key, std::size_t fallback) {
  auto [it, inserted] = values_.try_emplace(key, std::to_string(fallback));
  return parse_integer<std::size_t>(key, it->second);
}

std::uint64_t Config::seed(const std::string& key, std::uint64_t fallback) {
  auto [it, inserted] = values_.try_emplace(key, std::to_string(fallback));
  return parse_integer<std::uint64_t>(key, it->second);
}

bool Config::flag(const std::string& key, bool fallback) {
  auto [it, inserted] = values_.try_emplace(key, fallback ? "true" : "false");
  const std::string& raw = it->second;
  if (raw == "true" || raw == "1" || raw == "yes") return true;
  if (raw == "false" || raw == "0" || raw == "no") return false;
  throw Error(ErrorCode::Config, "config key '" + key + "': expected true/false, got '" + raw + "'");
}

std::vector<std::size_t> Config::counts(const std::string& key, const std::vector<std::size_t>& fallback) {
  std::string joined;
  for (std::size_t i = 0; i < fallback.size(); ++i) {
    joined += (i ? "," : "") + std::to_string(fallback[i]);
  }
  auto [it, inserted] = values_.try_emplace(key, joined);
  std::vector<std::size_t> out;
  for (const auto& item : split_list(it->second)) out.push_back(parse_integer<std::size_t>(key, item));
  return out;
}

std::vector<double> Config::numbers(const std::string& key, const std::vector<double>& fallback) {
  std::string joined;
  for (std::size_t i = 0; i < fallback.size(); ++i) {
    joined += (i ? "," : "") + format_number(fallback[i]);
  }
  auto [it, inserted] = values_.try_emplace(key, joined);
  std::vector<double> out;
  for (const auto& item : split_list(it->second)) out.push_back(parse_double(key, item));
  return out;
}

std::string Config::to_ini() const {
  std::ostringstream os;
  std::string current;
  for (const auto& [full, value] : values_) {
    const auto dot = full.find('.');
    const std::string section = full.substr(0, dot);
    if (section != current) {
      if (!current.empty()) os << '\n';
      os << '[' << section << "]\n";
      current = section;
    }
    os << full.substr(dot + 1) << " = " << value << '\n';
  }
  return os.str();
}

}  // namespace slidewin
