#include "wsn/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "wsn/errors.hpp"

namespace wsn {

namespace {

auto record_key(const RunRecord& r) { return std::make_tuple(r.protocol, r.n_nodes, r.seed, r.n_gateways); }

void append_opt(std::string& out, const std::optional<std::uint32_t>& v) {
  if (v) out += std::to_string(*v);
}

std::vector<std::size_t> canonical_order(std::span<const SimResult> results) {
  std::vector<std::size_t> idx(results.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const SimConfig& x = results[a].config_echo;
    const SimConfig& y = results[b].config_echo;
    return std::make_tuple(x.protocol, x.n_nodes, x.seed, x.n_gateways) <
           std::make_tuple(y.protocol, y.n_nodes, y.seed, y.n_gateways);
  });
  return idx;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <typename T>
T field_number(std::string_view text, int line, const char* column) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end)
    throw ParseError(column, line, "bad value '" + std::string(text) + "'");
  return value;
}

std::optional<std::uint32_t> field_optional(std::string_view text, int line, const char* column) {
  if (text.empty()) return std::nullopt;
  return field_number<std::uint32_t>(text, line, column);
}

constexpr std::string_view kRunsHeader =
    "protocol,n_nodes,n_gateways,seed,fnd,hnd,lnd,rounds_executed,total_energy_spent_j";
constexpr std::string_view kSeriesHeader =
    "protocol,n_nodes,seed,round,alive_normal,alive_high,heads,energy_remaining_j,packets_to_sink";

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

RunRecord to_record(const SimResult& result) {
  RunRecord r;
  r.protocol = result.config_echo.protocol;
  r.n_nodes = result.config_echo.n_nodes;
  r.n_gateways = result.config_echo.n_gateways;
  r.seed = result.config_echo.seed;
  r.lifetime = result.lifetime;
  r.rounds_executed = result.rounds_executed;
  r.total_energy_spent_j = result.energy_spent_total;
  return r;
}

std::vector<RunRecord> to_records(std::span<const SimResult> results) {
  std::vector<RunRecord> out;
  out.reserve(results.size());
  for (const SimResult& r : results) out.push_back(to_record(r));
  std::stable_sort(out.begin(), out.end(),
                   [](const RunRecord& a, const RunRecord& b) { return record_key(a) < record_key(b); });
  return out;
}

MetricStats metric_stats(std::span<const std::optional<std::uint32_t>> values) {
  MetricStats s;
  std::vector<double> xs;
  for (const auto& v : values) {
    if (v)
      xs.push_back(static_cast<double>(*v));
    else
      ++s.undefined;
  }
  s.defined = static_cast<std::uint32_t>(xs.size());
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

ComparisonSummary summarize(std::span<const RunRecord> records) {
  if (records.empty()) throw InvalidParameters("summarize: no runs");
  std::vector<RunRecord> sorted(records.begin(), records.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const RunRecord& a, const RunRecord& b) { return record_key(a) < record_key(b); });

  ComparisonSummary out;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const CellKey key{sorted[i].protocol, sorted[i].n_nodes};
    std::vector<std::optional<std::uint32_t>> fnd, hnd, lnd;
    for (; i < sorted.size() && CellKey{sorted[i].protocol, sorted[i].n_nodes} == key; ++i) {
      fnd.push_back(sorted[i].lifetime.fnd);
      hnd.push_back(sorted[i].lifetime.hnd);
      lnd.push_back(sorted[i].lifetime.lnd);
    }
    CellSummary cell;
    cell.runs = static_cast<std::uint32_t>(fnd.size());
    cell.fnd = metric_stats(fnd);
    cell.hnd = metric_stats(hnd);
    cell.lnd = metric_stats(lnd);
    out.per_cell.emplace(key, cell);
  }
  return out;
}

std::string runs_csv(std::span<const RunRecord> records) {
  std::vector<RunRecord> sorted(records.begin(), records.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const RunRecord& a, const RunRecord& b) { return record_key(a) < record_key(b); });
  std::string out(kRunsHeader);
  out += '\n';
  for (const RunRecord& r : sorted) {
    out += to_string(r.protocol);
    out += ',' + std::to_string(r.n_nodes) + ',' + std::to_string(r.n_gateways) + ',' +
           std::to_string(r.seed) + ',';
    append_opt(out, r.lifetime.fnd);
    out += ',';
    append_opt(out, r.lifetime.hnd);
    out += ',';
    append_opt(out, r.lifetime.lnd);
    out += ',' + std::to_string(r.rounds_executed) + ',' + format_double(r.total_energy_spent_j) + '\n';
  }
  return out;
}

std::string series_csv(std::span<const SimResult> results) {
  std::string out(kSeriesHeader);
  out += '\n';
  for (std::size_t i : canonical_order(results)) {
    const SimResult& r = results[i];
    std::string prefix(to_string(r.config_echo.protocol));
    prefix += ',' + std::to_string(r.config_echo.n_nodes) + ',' + std::to_string(r.config_echo.seed) + ',';
    for (const RoundMetrics& m : r.series) {
      out += prefix;
      out += std::to_string(m.round);
      out += ',';
      out += std::to_string(m.alive_normal);
      out += ',';
      out += std::to_string(m.alive_high);
      out += ',';
      out += std::to_string(m.heads_count);
      out += ',';
      out += format_double(m.energy_remaining_total);
      out += ',';
      out += std::to_string(m.packets_to_sink);
      out += '\n';
    }
  }
  return out;
}

std::string summary_csv(const ComparisonSummary& summary) {
  std::string out = "protocol,n_nodes,metric,runs,undefined,mean,min,max,stddev\n";
  for (const auto& [key, cell] : summary.per_cell) {
    const std::pair<const char*, const MetricStats*> metrics[] = {
        {"fnd", &cell.fnd}, {"hnd", &cell.hnd}, {"lnd", &cell.lnd}};
    for (const auto& [name, s] : metrics) {
      out += std::string(to_string(key.first)) + ',' + std::to_string(key.second) + ',' + name + ',' +
             std::to_string(cell.runs) + ',' + std::to_string(s->undefined) + ',';
      if (s->has_stats()) {
        out += format_double(s->mean) + ',' + format_double(s->min) + ',' + format_double(s->max) +
               ',' + format_double(s->stddev);
      } else {
        out += ",,,";
      }
      out += '\n';
    }
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

void emit_csv(std::span<const SimResult> results, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_text_file(dir / "runs.csv", runs_csv(to_records(results)));
  write_text_file(dir / "series.csv", series_csv(results));
}

void emit_plot_data(std::span<const SimResult> results, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  const auto order = canonical_order(results);
  std::set<ProtocolKind> protocols;
  std::set<std::uint32_t> node_counts;
  for (const SimResult& r : results) {
    protocols.insert(r.config_echo.protocol);
    node_counts.insert(r.config_echo.n_nodes);
  }

  for (ProtocolKind kind : protocols) {
    std::string out;
    bool first_block = true;
    for (std::uint32_t n : node_counts) {
      std::vector<const SimResult*> runs;
      for (std::size_t i : order)
        if (results[i].config_echo.protocol == kind && results[i].config_echo.n_nodes == n)
          runs.push_back(&results[i]);
      if (runs.empty()) continue;

      std::size_t length = 0;
      for (const SimResult* r : runs) length = std::max(length, r->series.size());
      if (!first_block) out += "\n\n";
      first_block = false;
      out += "# protocol=" + std::string(to_string(kind)) + " n_nodes=" + std::to_string(n) +
             " seeds=" + std::to_string(runs.size()) + "\n# round mean_alive\n";
      for (std::size_t t = 0; t < length; ++t) {
        double sum = 0.0;
        // A run that stopped early holds its final alive count.
        for (const SimResult* r : runs) {
          if (r->series.empty()) continue;
          const RoundMetrics& m = t < r->series.size() ? r->series[t] : r->series.back();
          sum += m.alive_sensing;
        }
        const auto round = t < runs.front()->series.size() ? runs.front()->series[t].round
                                                           : static_cast<std::uint32_t>(t);
        out += std::to_string(round) + ' ' + format_double(sum / static_cast<double>(runs.size())) + '\n';
      }
    }
    write_text_file(dir / ("alive_" + std::string(to_string(kind)) + ".dat"), out);
  }

  const ComparisonSummary summary = summarize(to_records(results));
  std::string cmp = "# n_nodes mean_fnd_leach mean_fnd_sep mean_fnd_gateway\n";
  for (std::uint32_t n : node_counts) {
    cmp += std::to_string(n);
    for (ProtocolKind kind : {ProtocolKind::Leach, ProtocolKind::Sep, ProtocolKind::Gateway}) {
      const auto it = summary.per_cell.find({kind, n});
      const bool known = it != summary.per_cell.end() && it->second.fnd.has_stats();
      cmp += ' ';
      cmp += known ? format_double(it->second.fnd.mean) : std::string("nan");
    }
    cmp += '\n';
  }
  write_text_file(dir / "fnd_vs_n.dat", cmp);
}

std::vector<RunRecord> parse_runs_csv(std::string_view text) {
  std::vector<RunRecord> out;
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
    start = end == std::string_view::npos ? text.size() : end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != kRunsHeader) throw ParseError("", 1, "unexpected runs.csv header");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 9) throw ParseError("", line_no, "expected 9 fields");
    RunRecord r;
    const auto kind = parse_protocol(f[0]);
    if (!kind) throw ParseError("protocol", line_no, "unknown protocol");
    r.protocol = *kind;
    r.n_nodes = field_number<std::uint32_t>(f[1], line_no, "n_nodes");
    r.n_gateways = field_number<std::uint32_t>(f[2], line_no, "n_gateways");
    r.seed = field_number<std::uint64_t>(f[3], line_no, "seed");
    r.lifetime.fnd = field_optional(f[4], line_no, "fnd");
    r.lifetime.hnd = field_optional(f[5], line_no, "hnd");
    r.lifetime.lnd = field_optional(f[6], line_no, "lnd");
    r.rounds_executed = field_number<std::uint32_t>(f[7], line_no, "rounds_executed");
    r.total_energy_spent_j = field_number<double>(f[8], line_no, "total_energy_spent_j");
    out.push_back(r);
  }
  if (line_no == 0) throw ParseError("", 0, "empty runs.csv");
  return out;
}

std::vector<RunRecord> read_runs_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_runs_csv(buf.str());
}

}  // namespace wsn
