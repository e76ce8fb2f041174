#include "routinelog/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <nlohmann/json.hpp>

namespace routinelog {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string synthetic_timestamp(std::size_t i) {
  // 2025-01-01T00:00:00Z plus i seconds.
  std::time_t t = 1735689600 + static_cast<std::time_t>(i);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<std::size_t> column(const CsvRow& header, std::string_view name) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

// --------------------------------------------------------------------- CSV

std::vector<CsvRow> parse_csv(std::istream& in) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t quote_line = 0;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    if (field_started || !row.empty()) {
      end_field();
      rows.push_back(std::move(row));
    }
    row.clear();
  };

  char c;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        field_started = true;
        quote_line = line;
        break;
      case ',':
        end_field();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) {
    throw Error("unterminated quoted field starting on line " + std::to_string(quote_line));
  }
  end_row();
  return rows;
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_field(fields[i]);
  }
  out << '\n';
}

// ----------------------------------------------------------------- UI logs

UILogData read_ui_log(std::istream& in, const UILogReadOptions& options) {
  const auto rows = parse_csv(in);
  if (rows.empty()) throw Error("UI log has no header row");
  const auto& header = rows.front();
  const auto action_col = column(header, "action");
  if (!action_col) throw Error("UI log header lacks the required 'action' column");
  const auto case_col = column(header, "case");

  UILogData data;
  if (options.alphabet) data.alphabet = *options.alphabet;
  std::vector<std::string> order;
  std::map<std::string, std::size_t> group_of;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const auto row_no = std::to_string(r + 1);
    if (row.size() != header.size()) {
      throw Error("row " + row_no + ": expected " + std::to_string(header.size()) +
                  " fields, found " + std::to_string(row.size()));
    }
    const auto& label = row[*action_col];
    if (label.empty()) throw Error("row " + row_no + ": empty action label");
    Action a;
    if (options.frozen) {
      auto found = data.alphabet.find(label);
      if (!found) throw Error("row " + row_no + ": unknown action label '" + label + "'");
      a = *found;
    } else {
      a = data.alphabet.intern(label);
    }
    data.log.actions.push_back(a);
    if (case_col) {
      const auto& id = row[*case_col];
      if (id.empty()) throw Error("row " + row_no + ": empty case id");
      data.case_ids.push_back(id);
    }
  }

  if (case_col) {
    ExecutionMultiset groups;
    for (std::size_t i = 0; i < data.case_ids.size(); ++i) {
      auto [it, inserted] = group_of.emplace(data.case_ids[i], groups.size());
      if (inserted) groups.emplace_back();
      groups[it->second].actions.push_back(data.log.actions[i]);
    }
    data.ground_truth = std::move(groups);
  }
  return data;
}

UILogData read_ui_log(const fs::path& path, const UILogReadOptions& options) {
  auto in = open_in(path);
  try {
    return read_ui_log(in, options);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_ui_log(std::ostream& out, const UILog& log, const ActionAlphabet& alphabet,
                  std::span<const std::string> case_ids, std::string_view user) {
  if (!case_ids.empty() && case_ids.size() != log.size()) {
    throw Error("case id count does not match the log length");
  }
  std::vector<std::string> header{"timestamp", "user", "action"};
  if (!case_ids.empty()) header.emplace_back("case");
  write_csv_row(out, header);
  for (std::size_t i = 0; i < log.size(); ++i) {
    std::vector<std::string> row{synthetic_timestamp(i), std::string(user),
                                 alphabet.label(log.actions[i])};
    if (!case_ids.empty()) row.push_back(case_ids[i]);
    write_csv_row(out, row);
  }
}

void write_ui_log(const fs::path& path, const UILog& log, const ActionAlphabet& alphabet,
                  std::span<const std::string> case_ids) {
  auto out = open_out(path);
  write_ui_log(out, log, alphabet, case_ids);
}

void write_executions(std::ostream& out, const ExecutionMultiset& executions,
                      const ActionAlphabet& alphabet) {
  out << "case,action\n";
  for (std::size_t j = 0; j < executions.size(); ++j) {
    for (Action a : executions[j].actions) {
      write_csv_row(out, std::vector<std::string>{"e" + std::to_string(j), alphabet.label(a)});
    }
  }
}

// -------------------------------------------------------------------- PNML

namespace {

std::string attr(const pt::ptree& node, const char* name) {
  return node.get<std::string>(std::string("<xmlattr>.") + name, "");
}

std::optional<std::string> name_text(const pt::ptree& node) {
  auto text = node.get_optional<std::string>("name.text");
  if (!text) return std::nullopt;
  std::string s = *text;
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return std::string{};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::uint32_t count_text(const pt::ptree& node, const std::string& where) {
  const auto text = node.get<std::string>("text", "1");
  try {
    const auto v = std::stol(text);
    if (v < 0) throw Error("negative token count");
    return static_cast<std::uint32_t>(v);
  } catch (const std::exception&) {
    throw Error("malformed PNML: bad count '" + text + "' in " + where);
  }
}

struct PnmlArc {
  std::string source, target;
  std::uint32_t weight;
};

void collect(const pt::ptree& container, PetriNet& net, std::vector<std::string>& initial,
             std::vector<PnmlArc>& arcs) {
  for (const auto& [key, child] : container) {
    if (key == "page") {
      collect(child, net, initial, arcs);
    } else if (key == "place") {
      const auto id = attr(child, "id");
      if (id.empty()) throw Error("malformed PNML: place without id");
      net.add_place(id);
      if (auto m = child.get_child_optional("initialMarking")) {
        const auto tokens = count_text(*m, "initialMarking of " + id);
        for (std::uint32_t k = 0; k < tokens; ++k) initial.push_back(id);
      }
    } else if (key == "transition") {
      const auto id = attr(child, "id");
      if (id.empty()) throw Error("malformed PNML: transition without id");
      auto label = name_text(child);
      for (const auto& [tk, tool] : child) {
        if (tk == "toolspecific" && attr(tool, "activity") == "$invisible$") label.reset();
      }
      net.add_transition(id, label);
    } else if (key == "arc") {
      std::uint32_t weight = 1;
      if (auto ins = child.get_child_optional("inscription")) {
        weight = count_text(*ins, "arc inscription");
      }
      arcs.push_back({attr(child, "source"), attr(child, "target"), weight});
    }
  }
}

}  // namespace

PetriNet read_pnml(std::istream& in) {
  pt::ptree doc;
  try {
    pt::read_xml(in, doc);
  } catch (const pt::xml_parser_error& e) {
    throw Error(std::string("malformed PNML: ") + e.what());
  }
  const auto root = doc.get_child_optional("pnml");
  if (!root) throw Error("malformed PNML: missing <pnml> root");
  const pt::ptree* net_node = nullptr;
  for (const auto& [key, child] : *root) {
    if (key == "net") {
      net_node = &child;
      break;
    }
  }
  if (!net_node) throw Error("malformed PNML: no <net> element");

  PetriNet net;
  net.name = name_text(*net_node).value_or(attr(*net_node, "id"));
  std::vector<std::string> initial;
  std::vector<PnmlArc> arcs;
  collect(*net_node, net, initial, arcs);
  for (const auto& a : arcs) {
    try {
      net.add_arc(a.source, a.target, a.weight);
    } catch (const Error& e) {
      throw Error(std::string("malformed PNML: ") + e.what());
    }
  }
  net.set_initial(net.marking_of(initial));

  std::optional<Marking> final_marking;
  if (auto fm = net_node->get_child_optional("finalmarkings")) {
    for (const auto& [key, marking] : *fm) {
      if (key != "marking") continue;
      Marking m{std::vector<std::uint32_t>(net.places().size(), 0)};
      for (const auto& [pk, place] : marking) {
        if (pk != "place") continue;
        const auto idref = attr(place, "idref");
        auto p = net.place_index(idref);
        if (!p) throw Error("malformed PNML: final marking references unknown place '" + idref + "'");
        m.tokens[*p] += count_text(place, "final marking");
      }
      final_marking = std::move(m);
      break;
    }
  }
  if (!final_marking || final_marking->total() == 0) {
    const auto sinks = net.sink_places();
    if (sinks.size() != 1) throw Error("final marking undefined");
    Marking m{std::vector<std::uint32_t>(net.places().size(), 0)};
    m.tokens[sinks.front()] = 1;
    final_marking = std::move(m);
  }
  net.set_final(std::move(*final_marking));
  net.validate();
  return net;
}

PetriNet read_pnml(const fs::path& path) {
  auto in = open_in(path);
  try {
    return read_pnml(in);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_pnml(std::ostream& out, const PetriNet& net) {
  const auto net_id = net.name.empty() ? std::string("net") : net.name;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<pnml>\n"
      << "  <net id=\"" << xml_escape(net_id)
      << "\" type=\"http://www.pnml.org/version-2009/grammar/pnmlcoremodel\">\n"
      << "    <name><text>" << xml_escape(net_id) << "</text></name>\n"
      << "    <page id=\"page0\">\n";
  const auto& init = net.initial_marking().tokens;
  for (std::size_t p = 0; p < net.places().size(); ++p) {
    out << "      <place id=\"" << xml_escape(net.places()[p]) << "\">\n"
        << "        <name><text>" << xml_escape(net.places()[p]) << "</text></name>\n";
    if (init[p] > 0) out << "        <initialMarking><text>" << init[p] << "</text></initialMarking>\n";
    out << "      </place>\n";
  }
  for (const auto& t : net.transitions()) {
    out << "      <transition id=\"" << xml_escape(t.id) << "\">\n"
        << "        <name><text>" << xml_escape(t.label.value_or(t.id)) << "</text></name>\n";
    if (t.silent()) {
      out << "        <toolspecific tool=\"ProM\" version=\"6.4\" activity=\"$invisible$\"/>\n";
    }
    out << "      </transition>\n";
  }
  std::size_t arc_id = 0;
  auto arc = [&](const std::string& s, const std::string& t, std::uint32_t w) {
    out << "      <arc id=\"arc" << arc_id++ << "\" source=\"" << xml_escape(s) << "\" target=\""
        << xml_escape(t) << "\"";
    if (w == 1) {
      out << "/>\n";
    } else {
      out << ">\n        <inscription><text>" << w << "</text></inscription>\n      </arc>\n";
    }
  };
  for (std::size_t t = 0; t < net.transitions().size(); ++t) {
    for (const auto& a : net.inputs(t)) arc(net.places()[a.place], net.transitions()[t].id, a.weight);
    for (const auto& a : net.outputs(t)) arc(net.transitions()[t].id, net.places()[a.place], a.weight);
  }
  out << "    </page>\n    <finalmarkings>\n      <marking>\n";
  const auto& fin = net.final_marking().tokens;
  for (std::size_t p = 0; p < net.places().size(); ++p) {
    if (fin[p] > 0) {
      out << "        <place idref=\"" << xml_escape(net.places()[p]) << "\"><text>" << fin[p]
          << "</text></place>\n";
    }
  }
  out << "      </marking>\n    </finalmarkings>\n  </net>\n</pnml>\n";
}

void write_pnml(const fs::path& path, const PetriNet& net) {
  auto out = open_out(path);
  write_pnml(out, net);
}

// ------------------------------------------------------------- action sets

GroundTruthActionSets read_action_sets(std::istream& in, const ActionAlphabet& alphabet) {
  nlohmann::ordered_json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed action-set file: ") + e.what());
  }
  if (!doc.is_object()) throw Error("action-set file must be a JSON object");
  GroundTruthActionSets out;
  for (const auto& [name, labels] : doc.items()) {
    if (!labels.is_array()) throw Error("action set '" + name + "' must be a list of labels");
    ActionSet set;
    for (const auto& l : labels) {
      if (!l.is_string()) throw Error("action set '" + name + "' contains a non-string label");
      const auto label = l.get<std::string>();
      auto a = alphabet.find(label);
      if (!a) throw Error("action set '" + name + "' uses unknown label '" + label + "'");
      set.insert(*a);
    }
    if (set.empty()) throw Error("action set '" + name + "' is empty");
    out.names.push_back(name);
    out.sets.push_back(std::move(set));
  }
  if (out.sets.empty()) throw Error("action-set file defines no types");
  return out;
}

GroundTruthActionSets read_action_sets(const fs::path& path, const ActionAlphabet& alphabet) {
  auto in = open_in(path);
  try {
    return read_action_sets(in, alphabet);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_action_sets(std::ostream& out, const GroundTruthActionSets& sets,
                       const ActionAlphabet& alphabet) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < sets.sets.size(); ++i) {
    const auto name = i < sets.names.size() ? sets.names[i] : "type" + std::to_string(i);
    auto arr = nlohmann::ordered_json::array();
    for (Action a : sets.sets[i]) arr.push_back(alphabet.label(a));
    doc[name] = std::move(arr);
  }
  out << doc.dump(2) << '\n';
}

// ------------------------------------------------------------ routine logs

std::vector<fs::path> write_routine_logs(const ClusterSet& clusters, const ActionAlphabet& alphabet,
                                         const fs::path& directory,
                                         const RoutineLogWriteOptions& options) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec || !fs::is_directory(directory)) {
    throw Error("cannot create output directory '" + directory.string() + "'");
  }
  std::vector<fs::path> files;
  nlohmann::ordered_json manifest;
  manifest["n_clusters"] = clusters.size();
  manifest["empty_count"] = clusters.empty_count();
  manifest["clusters"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < clusters.logs.size(); ++i) {
    const auto& log = clusters.logs[i];
    const auto name = "routine_log_" + std::to_string(i) + ".csv";
    auto out = open_out(directory / name);
    out << "case,action\n";
    for (std::size_t j = 0; j < log.size(); ++j) {
      const auto case_id = "c" + std::to_string(i) + "_e" + std::to_string(j);
      for (Action a : log.executions[j].actions) {
        write_csv_row(out, std::vector<std::string>{case_id, alphabet.label(a)});
      }
    }
    if (!out) throw Error("failed writing '" + (directory / name).string() + "'");
    nlohmann::ordered_json entry;
    entry["index"] = i;
    entry["file"] = name;
    entry["executions"] = log.size();
    entry["empty"] = log.empty();

    if (options.xes) {
      const auto xes_name = "routine_log_" + std::to_string(i) + ".xes";
      auto x = open_out(directory / xes_name);
      x << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<log xes.version=\"1.0\" xmlns=\"http://www.xes-standard.org/\">\n"
        << "  <extension name=\"Concept\" prefix=\"concept\" uri=\"http://www.xes-standard.org/concept.xesext\"/>\n"
        << "  <string key=\"concept:name\" value=\"routine_log_" << i << "\"/>\n";
      for (std::size_t j = 0; j < log.size(); ++j) {
        x << "  <trace>\n    <string key=\"concept:name\" value=\"c" << i << "_e" << j << "\"/>\n";
        for (Action a : log.executions[j].actions) {
          x << "    <event><string key=\"concept:name\" value=\"" << xml_escape(alphabet.label(a))
            << "\"/></event>\n";
        }
        x << "  </trace>\n";
      }
      x << "</log>\n";
      entry["xes"] = xes_name;
    }
    manifest["clusters"].push_back(std::move(entry));
    files.push_back(directory / name);
  }
  auto m = open_out(directory / "manifest.json");
  m << manifest.dump(2) << '\n';
  return files;
}

ClusterSet read_routine_logs(const fs::path& directory, ActionAlphabet& alphabet) {
  auto in = open_in(directory / "manifest.json");
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed routine-log manifest: ") + e.what());
  }
  ClusterSet out;
  for (const auto& entry : manifest.at("clusters")) {
    auto csv = open_in(directory / entry.at("file").get<std::string>());
    const auto rows = parse_csv(csv);
    RoutineLog log;
    std::map<std::string, std::size_t> index;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() != 2) throw Error("routine log row " + std::to_string(r + 1) + " malformed");
      auto [it, inserted] = index.emplace(rows[r][0], log.executions.size());
      if (inserted) log.executions.emplace_back();
      log.executions[it->second].actions.push_back(alphabet.intern(rows[r][1]));
    }
    for (std::size_t j = 0; j < log.size(); ++j) out.assignment.push_back(out.logs.size());
    out.logs.push_back(std::move(log));
  }
  return out;
}

// ----------------------------------------------------------------- reports

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buf, ptr);
}

void write_report(std::ostream& out, std::span<const EvalRecord> records) {
  out << "log,technique,clusterer,noise_level,repetition,jc,fitness,empty_pct,n_clusters,"
         "runtime_ms,status\n";
  for (const auto& r : records) {
    write_csv_row(out, std::vector<std::string>{
                           r.log, r.technique, r.clusterer, format_double(r.noise_level),
                           std::to_string(r.repetition), format_double(r.jc),
                           format_double(r.fitness), format_double(r.empty_pct),
                           std::to_string(r.n_clusters), std::to_string(r.runtime_ms), r.status});
  }
}

std::vector<EvalRecord> read_report(std::istream& in) {
  const auto rows = parse_csv(in);
  if (rows.empty()) throw Error("report has no header");
  const auto& h = rows.front();
  const std::vector<std::string> required{"log",       "technique", "clusterer",  "noise_level",
                                          "repetition", "jc",        "fitness",    "empty_pct",
                                          "n_clusters", "runtime_ms"};
  std::vector<std::size_t> col;
  for (const auto& name : required) {
    auto c = column(h, name);
    if (!c) throw Error("report lacks column '" + name + "'");
    col.push_back(*c);
  }
  const auto status_col = column(h, "status");
  auto num = [](const std::string& s) {
    return s.empty() ? std::nan("") : std::stod(s);
  };
  std::vector<EvalRecord> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != h.size()) throw Error("report row " + std::to_string(r + 1) + " malformed");
    EvalRecord e;
    e.log = row[col[0]];
    e.technique = row[col[1]];
    e.clusterer = row[col[2]];
    e.noise_level = num(row[col[3]]);
    e.repetition = std::stoul(row[col[4]]);
    e.jc = num(row[col[5]]);
    e.fitness = num(row[col[6]]);
    e.empty_pct = num(row[col[7]]);
    e.n_clusters = std::stoul(row[col[8]]);
    e.runtime_ms = std::stoll(row[col[9]]);
    e.status = status_col ? row[*status_col] : "ok";
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace routinelog
