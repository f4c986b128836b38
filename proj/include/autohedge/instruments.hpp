#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace autohedge {

class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Autocallable coupon note. Barriers are returns relative to initial_price.
struct AutocallableSpec {
  double initial_price = 100.0;
  double term = 7.0;  // years
  int coupon_frequency = 1;   // months
  double coupon_rate = 0.0095;  // fraction of notional per coupon
  double coupon_barrier = -0.35;
  int autocall_frequency = 6;  // months
  double call_barrier = 0.0;
  double protection_barrier = -0.35;
  double notional = 100.0;

  void validate() const;
  int term_months() const;
  double coupon_amount() const { return coupon_rate * notional; }
  double max_total_flows() const;
};

struct ObservationSchedule {
  std::vector<int> coupon_months;
  std::vector<int> autocall_months;  // last entry is the maturity month
};

ObservationSchedule observation_schedule(const AutocallableSpec& spec);

struct CashFlow {
  double time;
  double amount;
};

enum class Termination { autocall, maturity };

struct NoteLifecycle {
  std::vector<CashFlow> flows;
  double termination_time = 0.0;
  Termination terminated_by = Termination::maturity;

  double total() const;
};

/// Incremental evaluation of the note, one monthly observation at a time.
/// Flows due at a month are emitted by `observe`; nothing is known about
/// months that were not yet observed.
class NoteObserver {
 public:
  explicit NoteObserver(const AutocallableSpec& spec);

  struct Outcome {
    double amount = 0.0;
    bool terminated = false;
    Termination reason = Termination::maturity;
  };

  /// `month` is the absolute month index (1 = first coupon date).
  Outcome observe(int month, double spot) const;

  bool is_coupon_month(int month) const;
  bool is_autocall_month(int month) const;
  int maturity_month() const { return maturity_; }
  /// First autocall month strictly after `month`, or the maturity month.
  int next_autocall_month(int month) const;

 private:
  AutocallableSpec spec_;
  int maturity_;
};

/// Lifecycle along a monthly path where path[m] is the spot at month m
/// (path[0] is issue). Throws ContractError when the path ends before the
/// note terminates.
NoteLifecycle note_lifecycle(const AutocallableSpec& spec, std::span<const double> path);

enum class OptionKind {
  european_call,
  european_put,
  digital_cash_call,
  digital_cash_put,
  american_call,
  american_put,
};

bool is_call(OptionKind kind);
bool is_digital(OptionKind kind);
bool is_american(OptionKind kind);
std::string to_string(OptionKind kind);
OptionKind option_kind_from_string(const std::string& name);

struct OptionSpec {
  OptionKind kind = OptionKind::european_call;
  double strike = 100.0;
  double maturity = 1.0;  // absolute episode time, years
  double cash_amount = 1.0;
  double quantity = 1.0;  // signed, + long

  void validate(double issue_time = 0.0) const;
};

/// Unsigned payoff of one unit. Digital call pays on spot >= strike, digital
/// put on spot < strike, so the two are complementary.
double vanilla_payoff(const OptionSpec& spec, double spot);

}  // namespace autohedge
