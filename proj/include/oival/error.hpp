#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace oival {

enum class errc {
  parse_error,
  seq_overflow,
  budget_exceeded,
  descriptor_exhausted,
  indistinguishable_up_to_horizon,
  x_equals_naturals,
  empty_transform,
  centered_check_failed,
  not_an_omega_witness,
  not_covered,
  omega_query_failed,
  m_out_of_block,
  not_coverable,
  prefix_too_short,
  empty_witness_set,
  tower_exhausted,
  unknown_suite,
  invalid_argument,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::parse_error: return "ParseError";
    case errc::seq_overflow: return "SeqOverflow";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::descriptor_exhausted: return "DescriptorExhausted";
    case errc::indistinguishable_up_to_horizon: return "IndistinguishableUpToHorizon";
    case errc::x_equals_naturals: return "XEqualsN";
    case errc::empty_transform: return "EmptyTransform";
    case errc::centered_check_failed: return "CenteredCheckFailed";
    case errc::not_an_omega_witness: return "NotAnOmegaWitness";
    case errc::not_covered: return "NotCovered";
    case errc::omega_query_failed: return "OmegaQueryFailed";
    case errc::m_out_of_block: return "MOutOfBlock";
    case errc::not_coverable: return "NotCoverable";
    case errc::prefix_too_short: return "PrefixTooShort";
    case errc::empty_witness_set: return "EmptyI";
    case errc::tower_exhausted: return "TowerExhausted";
    case errc::unknown_suite: return "UnknownSuite";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "Error";
}

// All workbench failures funnel through this one type; `code` is stable, the
// message is for humans and may carry offender indices.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace oival
