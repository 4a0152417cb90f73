#pragma once

#include <optional>
#include <variant>
#include <vector>

namespace qforma::env {

using PlotId = int;

struct Edible {
  bool operator==(const Edible&) const = default;
};

struct Regrowing {
  int days_remaining = 1;
  bool watered = false;
  bool operator==(const Regrowing&) const = default;
};

struct VegetablePlot {
  PlotId id = 0;
  std::variant<Edible, Regrowing> state;

  bool edible() const { return std::holds_alternative<Edible>(state); }
  bool operator==(const VegetablePlot&) const = default;
};

struct Census {
  int edible_count = 0;
  int regrowing_count = 0;
  bool operator==(const Census&) const = default;
};

/// The shared vegetable field. Plot ids are dense 0..N-1 and the count never changes.
class Field {
 public:
  Field(int initial_vegetables, int regrow_watered, int regrow_unwatered);

  /// Eats the lowest-id edible plot, leaving it unwatered at full regrowth time.
  /// Returns the plot id, or nullopt when nothing is edible.
  std::optional<PlotId> consume();

  /// Shortens the regrowth of a just-eaten plot to the watered duration.
  void water(PlotId id);

  /// Advances every regrowing plot by one day; returns how many became edible.
  int daily_tick();

  Census census() const;

  const std::vector<VegetablePlot>& plots() const { return plots_; }
  std::size_t size() const { return plots_.size(); }
  int regrow_watered() const { return regrow_watered_; }
  int regrow_unwatered() const { return regrow_unwatered_; }

  bool operator==(const Field&) const = default;

 private:
  std::vector<VegetablePlot> plots_;
  int regrow_watered_;
  int regrow_unwatered_;
};

inline Field new_field(int initial_vegetables, int regrow_watered, int regrow_unwatered) {
  return Field(initial_vegetables, regrow_watered, regrow_unwatered);
}

}  // namespace qforma::env
