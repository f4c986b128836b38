#include "autohedge/instruments.hpp"

#include <algorithm>
#include <cmath>

namespace autohedge {

void AutocallableSpec::validate() const {
  if (!(initial_price > 0.0)) throw std::invalid_argument("note.initial_price must be > 0");
  if (!(term > 0.0)) throw std::invalid_argument("note.term must be > 0");
  if (coupon_frequency < 1) throw std::invalid_argument("note.coupon_frequency must be >= 1");
  if (autocall_frequency < 1) throw std::invalid_argument("note.autocall_frequency must be >= 1");
  if (autocall_frequency % coupon_frequency != 0) {
    throw std::invalid_argument("note.coupon_frequency must divide note.autocall_frequency");
  }
  if (!(protection_barrier <= 0.0)) {
    throw std::invalid_argument("note.protection_barrier must be <= 0");
  }
  if (!(coupon_barrier <= call_barrier)) {
    throw std::invalid_argument("note.coupon_barrier must be <= note.call_barrier");
  }
  if (!(notional > 0.0)) throw std::invalid_argument("note.notional must be > 0");
  if (!(coupon_rate >= 0.0)) throw std::invalid_argument("note.coupon_rate must be >= 0");
  const double months = term * 12.0;
  if (std::abs(months - std::round(months)) > 1e-9) {
    throw std::invalid_argument("note.term must be a whole number of months");
  }
}

int AutocallableSpec::term_months() const { return static_cast<int>(std::lround(term * 12.0)); }

double AutocallableSpec::max_total_flows() const {
  const int n_coupons = term_months() / coupon_frequency;
  return notional + n_coupons * coupon_amount();
}

ObservationSchedule observation_schedule(const AutocallableSpec& spec) {
  ObservationSchedule s;
  const int maturity = spec.term_months();
  for (int m = spec.coupon_frequency; m <= maturity; m += spec.coupon_frequency) {
    s.coupon_months.push_back(m);
  }
  for (int m = spec.autocall_frequency; m < maturity; m += spec.autocall_frequency) {
    s.autocall_months.push_back(m);
  }
  s.autocall_months.push_back(maturity);
  return s;
}

double NoteLifecycle::total() const {
  double sum = 0.0;
  for (const auto& f : flows) sum += f.amount;
  return sum;
}

NoteObserver::NoteObserver(const AutocallableSpec& spec) : spec_(spec), maturity_(spec.term_months()) {}

bool NoteObserver::is_coupon_month(int month) const {
  return month >= 1 && month <= maturity_ && month % spec_.coupon_frequency == 0;
}

bool NoteObserver::is_autocall_month(int month) const {
  return month >= 1 && (month == maturity_ ||
                        (month < maturity_ && month % spec_.autocall_frequency == 0));
}

int NoteObserver::next_autocall_month(int month) const {
  const int next = (month / spec_.autocall_frequency + 1) * spec_.autocall_frequency;
  return std::min(next, maturity_);
}

NoteObserver::Outcome NoteObserver::observe(int month, double spot) const {
  Outcome out;
  const double ret = spot / spec_.initial_price - 1.0;
  if (is_coupon_month(month) && ret >= spec_.coupon_barrier) out.amount += spec_.coupon_amount();
  if (month == maturity_) {
    out.amount += ret >= spec_.protection_barrier ? spec_.notional : spec_.notional * (1.0 + ret);
    out.terminated = true;
    out.reason = Termination::maturity;
  } else if (is_autocall_month(month) && ret >= spec_.call_barrier) {
    out.amount += spec_.notional;
    out.terminated = true;
    out.reason = Termination::autocall;
  }
  return out;
}

NoteLifecycle note_lifecycle(const AutocallableSpec& spec, std::span<const double> path) {
  spec.validate();
  const NoteObserver observer(spec);
  NoteLifecycle life;
  for (int m = 1; m <= observer.maturity_month(); ++m) {
    if (static_cast<std::size_t>(m) >= path.size()) {
      throw ContractError("note_lifecycle: path ends at month " + std::to_string(path.size() - 1) +
                          " before the note terminates");
    }
    const auto outcome = observer.observe(m, path[m]);
    const double t = m / 12.0;
    if (outcome.amount != 0.0) life.flows.push_back({t, outcome.amount});
    if (outcome.terminated) {
      life.termination_time = t;
      life.terminated_by = outcome.reason;
      return life;
    }
  }
  return life;  // unreachable: maturity always terminates
}

bool is_call(OptionKind kind) {
  return kind == OptionKind::european_call || kind == OptionKind::digital_cash_call ||
         kind == OptionKind::american_call;
}

bool is_digital(OptionKind kind) {
  return kind == OptionKind::digital_cash_call || kind == OptionKind::digital_cash_put;
}

bool is_american(OptionKind kind) {
  return kind == OptionKind::american_call || kind == OptionKind::american_put;
}

std::string to_string(OptionKind kind) {
  switch (kind) {
    case OptionKind::european_call: return "european_call";
    case OptionKind::european_put: return "european_put";
    case OptionKind::digital_cash_call: return "digital_cash_call";
    case OptionKind::digital_cash_put: return "digital_cash_put";
    case OptionKind::american_call: return "american_call";
    case OptionKind::american_put: return "american_put";
  }
  return "unknown";
}

OptionKind option_kind_from_string(const std::string& name) {
  for (auto k : {OptionKind::european_call, OptionKind::european_put,
                 OptionKind::digital_cash_call, OptionKind::digital_cash_put,
                 OptionKind::american_call, OptionKind::american_put}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown option kind '" + name + "'");
}

void OptionSpec::validate(double issue_time) const {
  if (!(strike > 0.0)) throw std::invalid_argument("option strike must be > 0");
  if (!(maturity > issue_time)) throw std::invalid_argument("option maturity must follow issue");
  if (is_digital(kind) && !(cash_amount > 0.0)) {
    throw std::invalid_argument("digital cash_amount must be > 0");
  }
}

double vanilla_payoff(const OptionSpec& spec, double spot) {
  switch (spec.kind) {
    case OptionKind::european_call:
    case OptionKind::american_call: return std::max(spot - spec.strike, 0.0);
    case OptionKind::european_put:
    case OptionKind::american_put: return std::max(spec.strike - spot, 0.0);
    case OptionKind::digital_cash_call: return spot >= spec.strike ? spec.cash_amount : 0.0;
    case OptionKind::digital_cash_put: return spot < spec.strike ? spec.cash_amount : 0.0;
  }
  return 0.0;
}

}  // namespace autohedge
