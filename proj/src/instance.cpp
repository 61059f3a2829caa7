#include "roster/instance.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace roster {

PatternKind ShiftPattern::kind() const {
  const bool has_day = day_count() > 0;
  const bool has_night = night_count() > 0;
  if (has_day && !has_night) return PatternKind::Day;
  if (has_night && !has_day) return PatternKind::Night;
  return PatternKind::Mixed;
}

bool operator==(const Instance& a, const Instance& b) {
  return a.name == b.name && a.grades == b.grades && a.patterns == b.patterns &&
         a.nurses == b.nurses && a.pref.rows() == b.pref.rows() &&
         a.pref.cols() == b.pref.cols() && a.pref == b.pref &&
         a.demand.cols() == b.demand.cols() && a.demand == b.demand;
}

std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> out;
  const int n = inst.nurse_count();
  const int m = inst.pattern_count();

  if (inst.grades < 1 || inst.grades > kMaxGrades) {
    out.push_back("instance: grade count " + std::to_string(inst.grades) + " outside 1.." +
                  std::to_string(kMaxGrades));
  }
  if (n < 1) out.push_back("instance: no nurses");
  if (m < 1) out.push_back("instance: no patterns");

  for (int j = 0; j < m; ++j) {
    const SlotVector& c = inst.patterns[j].cover;
    if ((c.array() < 0).any() || (c.array() > 1).any()) {
      out.push_back("pattern " + std::to_string(j + 1) + ": cover flags must be 0 or 1");
    } else if (c.sum() == 0) {
      out.push_back("pattern " + std::to_string(j + 1) + ": covers no slot");
    }
  }

  if (inst.pref.rows() != n || inst.pref.cols() != m) {
    out.push_back("instance: preference table is " + std::to_string(inst.pref.rows()) + "x" +
                  std::to_string(inst.pref.cols()) + ", expected " + std::to_string(n) + "x" +
                  std::to_string(m));
    return out;
  }
  if (inst.demand.cols() != inst.grades) {
    out.push_back("instance: demand table has " + std::to_string(inst.demand.cols()) +
                  " grade columns, expected " + std::to_string(inst.grades));
  } else if ((inst.demand.array() < 0).any()) {
    out.push_back("instance: negative demand");
  }

  for (int i = 0; i < n; ++i) {
    const Nurse& nurse = inst.nurses[i];
    const std::string who = "nurse " + std::to_string(i + 1);
    if (nurse.grade < 0 || nurse.grade >= inst.grades) {
      out.push_back(who + ": grade " + std::to_string(nurse.grade + 1) + " out of range");
    }
    if (nurse.days_required < 1 || nurse.nights_required < 1) {
      out.push_back(who + ": days and nights required must be at least 1");
    }
    if (nurse.feasible.empty()) {
      out.push_back(who + ": empty feasible set");
    }
    std::set<int> seen;
    for (int j : nurse.feasible) {
      if (j < 0 || j >= m) {
        out.push_back(who + ": feasible set references undefined pattern " +
                      std::to_string(j + 1));
        continue;
      }
      if (!seen.insert(j).second) {
        out.push_back(who + ": pattern " + std::to_string(j + 1) + " listed twice");
      }
      const ShiftPattern& pat = inst.patterns[j];
      if (pat.kind() == PatternKind::Day && pat.day_count() != nurse.days_required) {
        out.push_back(who + ": day pattern " + std::to_string(j + 1) + " covers " +
                      std::to_string(pat.day_count()) + " days, contract requires " +
                      std::to_string(nurse.days_required));
      }
      if (pat.kind() == PatternKind::Night && pat.night_count() != nurse.nights_required) {
        out.push_back(who + ": night pattern " + std::to_string(j + 1) + " covers " +
                      std::to_string(pat.night_count()) + " nights, contract requires " +
                      std::to_string(nurse.nights_required));
      }
    }
    for (int j = 0; j < m; ++j) {
      const bool listed = seen.count(j) > 0;
      const int cost = inst.pref(i, j);
      if (listed && cost < 0) {
        out.push_back(who + ": missing or negative preference for pattern " +
                      std::to_string(j + 1));
      } else if (!listed && cost != kNoPref) {
        out.push_back(who + ": preference given for non-feasible pattern " +
                      std::to_string(j + 1));
      }
    }
  }
  return out;
}

namespace {

enum class Stage { Problem, Nurses, Grades, Patterns, Pattern, Nurse, Pref, Demand, End };

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, eol - pos);
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::istringstream in{std::string(raw)};
    Line line{number, {}};
    for (std::string tok; in >> tok;) line.tokens.push_back(std::move(tok));
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    pos = eol + 1;
  }
  return lines;
}

int to_int(const Line& line, std::size_t idx) {
  if (idx >= line.tokens.size()) throw ParseError(line.number, "missing value");
  const std::string& tok = line.tokens[idx];
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || value < -2147483647LL || value > 2147483647LL) {
    throw ParseError(line.number, "expected an integer, got '" + tok + "'");
  }
  return static_cast<int>(value);
}

void expect_size(const Line& line, std::size_t n) {
  if (line.tokens.size() != n) {
    throw ParseError(line.number, line.tokens[0] + " expects " + std::to_string(n - 1) +
                                      " values, got " + std::to_string(line.tokens.size() - 1));
  }
}

void expect_keyword(const Line& line, std::size_t idx, const char* keyword) {
  if (idx >= line.tokens.size() || line.tokens[idx] != keyword) {
    throw ParseError(line.number, std::string("expected ") + keyword);
  }
}

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::Problem: return "PROBLEM";
    case Stage::Nurses: return "NURSES";
    case Stage::Grades: return "GRADES";
    case Stage::Patterns: return "PATTERNS";
    case Stage::Pattern: return "PATTERN";
    case Stage::Nurse: return "NURSE";
    case Stage::Pref: return "PREF";
    case Stage::Demand: return "DEMAND";
    case Stage::End: return "END";
  }
  return "?";
}

}  // namespace

Instance parse_instance(std::string_view text) {
  Instance inst;
  int n = -1;
  int m = -1;
  std::vector<bool> pattern_seen;
  std::vector<bool> nurse_seen;
  std::vector<bool> demand_seen;
  Stage stage = Stage::Problem;
  bool ended = false;

  // Moves the cursor to `next`, rejecting sections that go backwards or
  // skip a mandatory header.
  auto advance = [&](const Line& line, Stage next) {
    if (ended) throw ParseError(line.number, "content after END");
    if (next < stage) {
      throw ParseError(line.number, std::string(stage_name(next)) + " after " +
                                        stage_name(stage) + " is out of order");
    }
    if (next >= Stage::Pattern && stage <= Stage::Patterns) {
      throw ParseError(line.number, std::string("missing section ") + stage_name(stage));
    }
    if (next <= Stage::Patterns && next != stage) {
      throw ParseError(line.number, std::string("expected ") + stage_name(stage) + ", got " +
                                        stage_name(next));
    }
    stage = next;
  };

  for (const Line& line : tokenize(text)) {
    const std::string& key = line.tokens[0];
    if (key == "PROBLEM") {
      advance(line, Stage::Problem);
      expect_size(line, 2);
      inst.name = line.tokens[1];
      stage = Stage::Nurses;
    } else if (key == "NURSES") {
      advance(line, Stage::Nurses);
      expect_size(line, 2);
      n = to_int(line, 1);
      if (n < 1) throw ParseError(line.number, "NURSES must be positive");
      stage = Stage::Grades;
    } else if (key == "GRADES") {
      advance(line, Stage::Grades);
      expect_size(line, 2);
      inst.grades = to_int(line, 1);
      if (inst.grades < 1 || inst.grades > kMaxGrades) {
        throw ParseError(line.number, "GRADES must be in 1.." + std::to_string(kMaxGrades));
      }
      stage = Stage::Patterns;
    } else if (key == "PATTERNS") {
      advance(line, Stage::Patterns);
      expect_size(line, 2);
      m = to_int(line, 1);
      if (m < 1) throw ParseError(line.number, "PATTERNS must be positive");
      inst.patterns.assign(m, ShiftPattern{});
      pattern_seen.assign(m, false);
      inst.nurses.assign(n, Nurse{});
      nurse_seen.assign(n, false);
      inst.pref = Eigen::MatrixXi::Constant(n, m, kNoPref);
      inst.demand = SlotGradeTable::Zero(kSlots, inst.grades);
      demand_seen.assign(static_cast<std::size_t>(kSlots * inst.grades), false);
      stage = Stage::Pattern;
    } else if (key == "PATTERN") {
      advance(line, Stage::Pattern);
      if (line.tokens.size() != 2 + kSlots) {
        throw ParseError(line.number, "PATTERN needs an id and " + std::to_string(kSlots) +
                                          " slot flags, got " +
                                          std::to_string(line.tokens.size() - 2) + " flags");
      }
      const int j = to_int(line, 1);
      if (j < 1 || j > m) throw ParseError(line.number, "pattern id " + std::to_string(j) +
                                                            " outside 1.." + std::to_string(m));
      if (pattern_seen[j - 1]) throw ParseError(line.number, "duplicate pattern " +
                                                                  std::to_string(j));
      pattern_seen[j - 1] = true;
      for (int k = 0; k < kSlots; ++k) {
        const int flag = to_int(line, 2 + k);
        if (flag != 0 && flag != 1) throw ParseError(line.number, "slot flags must be 0 or 1");
        inst.patterns[j - 1].cover(k) = flag;
      }
      if (inst.patterns[j - 1].cover.sum() == 0) {
        throw ParseError(line.number, "pattern " + std::to_string(j) + " covers no slot");
      }
    } else if (key == "NURSE") {
      advance(line, Stage::Nurse);
      if (std::find(pattern_seen.begin(), pattern_seen.end(), false) != pattern_seen.end()) {
        throw ParseError(line.number, "fewer PATTERN lines than PATTERNS declares");
      }
      if (line.tokens.size() < 10) throw ParseError(line.number, "NURSE line too short");
      expect_keyword(line, 2, "GRADE");
      expect_keyword(line, 4, "DAYS");
      expect_keyword(line, 6, "NIGHTS");
      expect_keyword(line, 8, "FEASIBLE");
      const int i = to_int(line, 1);
      if (i < 1 || i > n) throw ParseError(line.number, "nurse id " + std::to_string(i) +
                                                            " outside 1.." + std::to_string(n));
      if (nurse_seen[i - 1]) throw ParseError(line.number, "duplicate nurse " +
                                                                std::to_string(i));
      nurse_seen[i - 1] = true;
      Nurse& nurse = inst.nurses[i - 1];
      const int grade = to_int(line, 3);
      if (grade < 1 || grade > inst.grades) {
        throw ParseError(line.number, "grade " + std::to_string(grade) + " outside 1.." +
                                          std::to_string(inst.grades));
      }
      nurse.grade = grade - 1;
      nurse.days_required = to_int(line, 5);
      nurse.nights_required = to_int(line, 7);
      if (nurse.days_required < 1 || nurse.nights_required < 1) {
        throw ParseError(line.number, "DAYS and NIGHTS must be at least 1");
      }
      for (std::size_t t = 9; t < line.tokens.size(); ++t) {
        const int j = to_int(line, t);
        if (j < 1 || j > m) {
          throw ParseError(line.number, "undefined pattern id " + std::to_string(j));
        }
        if (std::find(nurse.feasible.begin(), nurse.feasible.end(), j - 1) !=
            nurse.feasible.end()) {
          throw ParseError(line.number, "pattern " + std::to_string(j) + " listed twice");
        }
        nurse.feasible.push_back(j - 1);
      }
    } else if (key == "PREF") {
      advance(line, Stage::Pref);
      expect_size(line, 4);
      const int i = to_int(line, 1);
      const int j = to_int(line, 2);
      const int cost = to_int(line, 3);
      if (i < 1 || i > n || !nurse_seen[i - 1]) {
        throw ParseError(line.number, "undefined nurse " + std::to_string(i));
      }
      if (j < 1 || j > m) throw ParseError(line.number, "undefined pattern " + std::to_string(j));
      const auto& feas = inst.nurses[i - 1].feasible;
      if (std::find(feas.begin(), feas.end(), j - 1) == feas.end()) {
        throw ParseError(line.number, "pattern " + std::to_string(j) +
                                          " is not feasible for nurse " + std::to_string(i));
      }
      if (cost < 0) throw ParseError(line.number, "negative preference cost");
      if (inst.pref(i - 1, j - 1) != kNoPref) {
        throw ParseError(line.number, "duplicate PREF for nurse " + std::to_string(i) +
                                          " pattern " + std::to_string(j));
      }
      inst.pref(i - 1, j - 1) = cost;
    } else if (key == "DEMAND") {
      advance(line, Stage::Demand);
      expect_size(line, 4);
      const int k = to_int(line, 1);
      const int s = to_int(line, 2);
      const int r = to_int(line, 3);
      if (k < 1 || k > kSlots) throw ParseError(line.number, "slot " + std::to_string(k) +
                                                                 " outside 1..14");
      if (s < 1 || s > inst.grades) throw ParseError(line.number, "grade " + std::to_string(s) +
                                                                      " out of range");
      if (r < 0) throw ParseError(line.number, "negative demand");
      const auto cell = static_cast<std::size_t>((s - 1) * kSlots + (k - 1));
      if (demand_seen[cell]) throw ParseError(line.number, "duplicate DEMAND row");
      demand_seen[cell] = true;
      inst.demand(k - 1, s - 1) = r;
    } else if (key == "END") {
      advance(line, Stage::End);
      expect_size(line, 1);
      ended = true;
    } else {
      throw ParseError(line.number, "unknown keyword '" + key + "'");
    }
  }

  if (!ended) {
    if (stage <= Stage::Patterns) {
      throw ParseError(0, std::string("missing section ") + stage_name(stage));
    }
    throw ParseError(0, "missing section END");
  }
  for (int i = 0; i < n; ++i) {
    if (!nurse_seen[i]) throw ParseError(0, "missing NURSE " + std::to_string(i + 1));
    for (int j : inst.nurses[i].feasible) {
      if (inst.pref(i, j) == kNoPref) {
        throw ParseError(0, "missing PREF for nurse " + std::to_string(i + 1) + " pattern " +
                                std::to_string(j + 1));
      }
    }
  }
  if (auto violations = validate_instance(inst); !violations.empty()) {
    throw ParseError(0, violations.front());
  }
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "PROBLEM " << inst.name << '\n'
      << "NURSES " << inst.nurse_count() << '\n'
      << "GRADES " << inst.grades << '\n'
      << "PATTERNS " << inst.pattern_count() << '\n';
  for (int j = 0; j < inst.pattern_count(); ++j) {
    out << "PATTERN " << j + 1;
    for (int k = 0; k < kSlots; ++k) out << ' ' << inst.patterns[j].cover(k);
    out << '\n';
  }
  for (int i = 0; i < inst.nurse_count(); ++i) {
    const Nurse& nurse = inst.nurses[i];
    out << "NURSE " << i + 1 << " GRADE " << nurse.grade + 1 << " DAYS " << nurse.days_required
        << " NIGHTS " << nurse.nights_required << " FEASIBLE";
    for (int j : nurse.feasible) out << ' ' << j + 1;
    out << '\n';
  }
  for (int i = 0; i < inst.nurse_count(); ++i) {
    for (int j : inst.nurses[i].feasible) {
      out << "PREF " << i + 1 << ' ' << j + 1 << ' ' << inst.pref(i, j) << '\n';
    }
  }
  for (int s = 0; s < inst.grades; ++s) {
    for (int k = 0; k < kSlots; ++k) {
      if (inst.demand(k, s) != 0) {
        out << "DEMAND " << k + 1 << ' ' << s + 1 << ' ' << inst.demand(k, s) << '\n';
      }
    }
  }
  out << "END\n";
  return out.str();
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_instance(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.message(), path);
  }
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file " + path);
  out << serialize_instance(inst);
}

}  // namespace roster
