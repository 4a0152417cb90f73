#include "qforma/env_sim.hpp"

#include <string>

#include "qforma/error.hpp"

namespace qforma::env {

Field::Field(int initial_vegetables, int regrow_watered, int regrow_unwatered)
    : regrow_watered_(regrow_watered), regrow_unwatered_(regrow_unwatered) {
  if (initial_vegetables < 0) throw Error(ErrorKind::ConfigError, "initial_vegetables must be >= 0");
  if (regrow_watered <= 0) throw Error(ErrorKind::ConfigError, "regrow_watered must be > 0");
  if (regrow_watered > regrow_unwatered)
    throw Error(ErrorKind::ConfigError, "regrow_watered must not exceed regrow_unwatered");
  plots_.reserve(static_cast<std::size_t>(initial_vegetables));
  for (PlotId id = 0; id < initial_vegetables; ++id) plots_.push_back({id, Edible{}});
}

std::optional<PlotId> Field::consume() {
  for (auto& plot : plots_) {
    if (plot.edible()) {
      plot.state = Regrowing{regrow_unwatered_, false};
      return plot.id;
    }
  }
  return std::nullopt;
}

void Field::water(PlotId id) {
  if (id < 0 || static_cast<std::size_t>(id) >= plots_.size())
    throw Error(ErrorKind::UnknownPlot, "no plot with id " + std::to_string(id));
  auto* regrowing = std::get_if<Regrowing>(&plots_[static_cast<std::size_t>(id)].state);
  if (regrowing == nullptr)
    throw Error(ErrorKind::WateringNotApplicable, "plot " + std::to_string(id) + " is edible");
  if (regrowing->watered)
    throw Error(ErrorKind::WateringNotApplicable, "plot " + std::to_string(id) + " is already watered");
  *regrowing = Regrowing{regrow_watered_, true};
}

int Field::daily_tick() {
  int matured = 0;
  for (auto& plot : plots_) {
    if (auto* r = std::get_if<Regrowing>(&plot.state)) {
      if (--r->days_remaining == 0) {
        plot.state = Edible{};
        ++matured;
      }
    }
  }
  return matured;
}

Census Field::census() const {
  Census c;
  for (const auto& plot : plots_) (plot.edible() ? c.edible_count : c.regrowing_count)++;
  return c;
}

}  // namespace qforma::env
