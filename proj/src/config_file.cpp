#include "wsn/config_file.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "wsn/errors.hpp"

namespace wsn {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text) {
  text = trim(text);
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end)
    throw std::invalid_argument("not a valid number: '" + std::string(text) + "'");
  return value;
}

std::pair<double, double> parse_pair(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw std::invalid_argument("expected two comma-separated numbers");
  return {parse_number<double>(parts[0]), parse_number<double>(parts[1])};
}

bool parse_bool(std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw std::invalid_argument("expected true or false");
}

using Setter = std::function<void(ConfigFile&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"area", [](ConfigFile& c, std::string_view v) {
         const auto [w, h] = parse_pair(v);
         c.base.area = {w, h};
       }},
      {"n_nodes", [](ConfigFile& c, std::string_view v) { c.base.n_nodes = parse_number<std::uint32_t>(v); }},
      {"n_gateways", [](ConfigFile& c, std::string_view v) { c.base.n_gateways = parse_number<std::uint32_t>(v); }},
      {"e0_normal", [](ConfigFile& c, std::string_view v) { c.base.e0_normal = parse_number<double>(v); }},
      {"e0_high", [](ConfigFile& c, std::string_view v) { c.base.e0_high = parse_number<double>(v); }},
      {"p_select", [](ConfigFile& c, std::string_view v) { c.base.p_select = parse_number<double>(v); }},
      {"packet_bits", [](ConfigFile& c, std::string_view v) { c.base.packet_bits = parse_number<std::uint32_t>(v); }},
      {"frames_per_round", [](ConfigFile& c, std::string_view v) { c.base.frames_per_round = parse_number<std::uint32_t>(v); }},
      {"max_rounds", [](ConfigFile& c, std::string_view v) { c.base.max_rounds = parse_number<std::uint32_t>(v); }},
      {"sink", [](ConfigFile& c, std::string_view v) {
         const auto [x, y] = parse_pair(v);
         c.base.sink = {x, y};
       }},
      {"protocol", [](ConfigFile& c, std::string_view v) {
         const auto kind = parse_protocol(trim(v));
         if (!kind) throw std::invalid_argument("expected leach, sep or gateway");
         c.base.protocol = *kind;
       }},
      {"sep_m", [](ConfigFile& c, std::string_view v) { c.base.sep_m = parse_number<double>(v); }},
      {"sep_a", [](ConfigFile& c, std::string_view v) { c.base.sep_a = parse_number<double>(v); }},
      {"seed", [](ConfigFile& c, std::string_view v) { c.base.seed = parse_number<std::uint64_t>(v); }},
      {"gateway_placement", [](ConfigFile& c, std::string_view v) {
         const auto p = parse_placement(trim(v));
         if (!p) throw std::invalid_argument("expected random or grid");
         c.base.gateway_placement = *p;
       }},
      {"setup_cost_joules", [](ConfigFile& c, std::string_view v) { c.base.setup_cost_joules = parse_number<double>(v); }},
      {"e_elec", [](ConfigFile& c, std::string_view v) { c.base.radio.e_elec = parse_number<double>(v); }},
      {"eps_fs", [](ConfigFile& c, std::string_view v) { c.base.radio.eps_fs = parse_number<double>(v); }},
      {"eps_mp", [](ConfigFile& c, std::string_view v) { c.base.radio.eps_mp = parse_number<double>(v); }},
      {"e_da", [](ConfigFile& c, std::string_view v) { c.base.radio.e_da = parse_number<double>(v); }},
      {"node_counts", [](ConfigFile& c, std::string_view v) { c.node_counts = parse_count_list(v); }},
      {"protocols", [](ConfigFile& c, std::string_view v) { c.protocols = parse_protocol_list(v); }},
      {"seeds", [](ConfigFile& c, std::string_view v) { c.seeds = parse_seed_list(v); }},
      {"pin_gateways", [](ConfigFile& c, std::string_view v) { c.pin_gateways = parse_bool(v); }},
  };
  return table;
}

// Maps an InvalidParameters message ("key: what") back to its key.
std::string key_of(const std::string& message) {
  const auto pos = message.find(':');
  return pos == std::string::npos ? std::string{} : message.substr(0, pos);
}

}  // namespace

std::vector<std::uint32_t> parse_count_list(std::string_view text) {
  std::vector<std::uint32_t> out;
  for (auto part : split(text, ',')) out.push_back(parse_number<std::uint32_t>(part));
  return out;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  text = trim(text);
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const auto lo = parse_number<std::uint64_t>(text.substr(0, dots));
    const auto hi = parse_number<std::uint64_t>(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("empty seed range");
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    return out;
  }
  std::vector<std::uint64_t> out;
  for (auto part : split(text, ',')) out.push_back(parse_number<std::uint64_t>(part));
  return out;
}

std::vector<ProtocolKind> parse_protocol_list(std::string_view text) {
  std::vector<ProtocolKind> out;
  for (auto part : split(text, ',')) {
    if (part == "all") {
      out.insert(out.end(), {ProtocolKind::Leach, ProtocolKind::Sep, ProtocolKind::Gateway});
      continue;
    }
    const auto kind = parse_protocol(part);
    if (!kind) throw std::invalid_argument("unknown protocol '" + std::string(part) + "'");
    out.push_back(*kind);
  }
  return out;
}

ConfigFile parse_config_text(std::string_view text) {
  ConfigFile cfg;
  std::map<std::string, int, std::less<>> seen;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("", line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError(key, line_no, "unknown key");
    if (const auto prev = seen.find(key); prev != seen.end())
      throw ParseError(key, line_no, "repeated key (first set on line " + std::to_string(prev->second) + ")");
    seen.emplace(key, line_no);
    if (value.empty()) throw ParseError(key, line_no, "missing value");
    try {
      it->second(cfg, value);
      cfg.base.validate();
    } catch (const InvalidParameters& e) {
      const std::string bad = key_of(e.what());
      // Only blame this line if it is the key that failed.
      if (bad == key || bad.empty()) throw ParseError(key, line_no, e.what());
    } catch (const std::invalid_argument& e) {
      throw ParseError(key, line_no, e.what());
    }
  }
  try {
    cfg.base.validate();
  } catch (const InvalidParameters& e) {
    const std::string bad = key_of(e.what());
    const auto where = seen.find(bad);
    throw ParseError(bad, where == seen.end() ? 0 : where->second, e.what());
  }
  return cfg;
}

ConfigFile parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("", 0, "cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_reference() {
  return R"(Config file keys (key = value, '#' comments, unknown keys rejected):
  area               = 100,100   deployment width,height in meters
  n_nodes            = 100       normal sensors
  n_gateways         = 4         high-energy nodes
  e0_normal          = 0.5       initial energy of normal sensors, J
  e0_high            = 1.0       initial energy of high-energy nodes, J
  p_select           = 0.1       cluster-head probability P, in (0,1)
  packet_bits        = 4000      bits per data packet
  frames_per_round   = 1         TDMA frames per round
  max_rounds         = 1000      round cap
  sink               = 50,100    sink position x,y in meters
  protocol           = leach     leach | sep | gateway
  sep_m              = (n_gateways/n_nodes)  SEP advanced fraction
  sep_a              = 1.0       SEP extra-energy factor
  seed               = 0         random stream seed
  gateway_placement  = random    random | grid
  setup_cost_joules  = 0         control cost per alive node per round, J
  e_elec             = 5e-08     J/bit electronics
  eps_fs             = 1e-11     J/bit/m^2 free-space amplifier
  eps_mp             = 1.3e-15   J/bit/m^4 multipath amplifier
  e_da               = 5e-09     J/bit/signal aggregation
Experiment keys:
  node_counts        = 50,100,200,300,400,500
  protocols          = leach,sep,gateway
  seeds              = 0..29
  pin_gateways       = false     true: use n_gateways for every node count
Command-line flags override file values.
)";
}

}  // namespace wsn
