#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace roster {

/// Slots 0..6 are the day shifts Mon..Sun, slots 7..13 the night shifts Mon..Sun.
inline constexpr int kSlots = 14;
inline constexpr int kDaySlots = 7;
inline constexpr int kMaxGrades = 8;

/// 0/1 cover flags of one pattern, or any per-slot quantity.
using SlotVector = Eigen::Matrix<int, kSlots, 1>;

/// Per (slot, grade row) table. Column s counts nurses of grade s or more
/// senior. Bounded column count keeps it off the heap.
using SlotGradeTable =
    Eigen::Matrix<int, kSlots, Eigen::Dynamic, Eigen::ColMajor, kSlots, kMaxGrades>;

enum class PatternKind { Day, Night, Mixed };

struct ShiftPattern {
  SlotVector cover = SlotVector::Zero();

  int day_count() const { return cover.head<kDaySlots>().sum(); }
  int night_count() const { return cover.tail<kDaySlots>().sum(); }
  PatternKind kind() const;

  friend bool operator==(const ShiftPattern& a, const ShiftPattern& b) {
    return a.cover == b.cover;
  }
};

/// Grades are 0-based internally, 0 = most senior. Pattern indices are
/// 0-based positions into Instance::patterns.
struct Nurse {
  int grade = 0;
  int days_required = 1;
  int nights_required = 1;
  std::vector<int> feasible;  // F(i), file order preserved

  bool same_contract(const Nurse& other) const {
    return days_required == other.days_required && nights_required == other.nights_required;
  }
  friend bool operator==(const Nurse&, const Nurse&) = default;
};

inline constexpr int kNoPref = -1;

struct Instance {
  std::string name;
  int grades = 0;
  std::vector<ShiftPattern> patterns;
  std::vector<Nurse> nurses;
  /// n x m preference costs; kNoPref outside the feasible sets.
  Eigen::MatrixXi pref;
  /// 14 x p demand R_ks.
  SlotGradeTable demand;

  int nurse_count() const { return static_cast<int>(nurses.size()); }
  int pattern_count() const { return static_cast<int>(patterns.size()); }

  /// q_is: nurse i counts toward grade row s when it is of grade s or more senior.
  bool counts_toward(int nurse, int grade_row) const { return nurses[nurse].grade <= grade_row; }

  int pref_cost(int nurse, int pattern) const { return pref(nurse, pattern); }

  bool is_feasible_for(int nurse, int pattern) const {
    return pattern >= 0 && pattern < pattern_count() && pref(nurse, pattern) != kNoPref;
  }

  friend bool operator==(const Instance& a, const Instance& b);
};

/// Thrown on malformed instance text. `line` is 1-based, 0 when the
/// error is not tied to one line (e.g. a missing section).
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message, const std::string& source = {})
      : std::runtime_error((source.empty() ? "" : source + ": ") +
                           (line > 0 ? "line " + std::to_string(line) + ": " : "") + message),
        line_(line),
        message_(message) {}
  int line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  int line_;
  std::string message_;
};

Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

/// Empty result means every structural invariant holds. Satisfiability of
/// the demand is not checked.
std::vector<std::string> validate_instance(const Instance& inst);

struct HourType {
  int days = 3;
  int nights = 3;
  double weight = 1.0;
};

struct GenSpec {
  int nurses = 30;
  int grades = 3;
  std::vector<HourType> hour_types{{4, 3, 0.5}, {3, 3, 0.5}};
  double tightness = 1.0;
  int pref_spread = 10;
  std::uint64_t seed = 1;
  /// When > 0, each F(i) is a random subset of this size that always keeps
  /// the hidden reference pattern. 0 keeps every pattern of the right size.
  int max_feasible = 0;
};

struct GeneratedInstance {
  Instance instance;
  /// Hidden reference assignment the demand was derived from.
  std::vector<int> reference;
};

GeneratedInstance generate_instance_with_reference(const GenSpec& spec);
Instance generate_instance(const GenSpec& spec);

}  // namespace roster
