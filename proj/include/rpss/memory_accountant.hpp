#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "symbols.hpp"

namespace rpss {

struct budget_exceeded : std::runtime_error {
    budget_exceeded(const std::string& label, std::uint64_t charged, std::uint64_t budget)
        : std::runtime_error("working-space budget exceeded at " + label + ": " +
                             std::to_string(charged) + " > " + std::to_string(budget) + " bits"),
          label(label),
          charged(charged),
          budget(budget) {}
    std::string label;
    std::uint64_t charged;
    std::uint64_t budget;
};

// Tracks the auxiliary bits the compressor is allowed to hold on top of the
// text itself.  The allowance grows with the alphabet: once new symbols are
// minted the text term n*ceil_lg(tau) dominates for small alphabets.
class memory_accountant {
  public:
    memory_accountant() = default;

    memory_accountant(std::size_t n, unsigned c, std::size_t initial_alphabet, bool enforce = true)
        : n_(n), c_(std::max(1u, c)), tau_(std::max<std::size_t>(1, initial_alphabet)),
          enforce_(enforce) {}

    void note_alphabet(std::size_t tau) { tau_ = std::max(tau_, tau); }

    std::uint64_t budget_bits() const {
        std::uint64_t lg_n = ceil_lg(std::max<std::uint64_t>(2, n_));
        std::uint64_t aux = std::max<std::uint64_t>((n_ / c_) * lg_n, n_ * ceil_lg(tau_));
        return aux + 64 * lg_n;
    }

    void charge(std::uint64_t bits, const char* label = "charge") {
        current_ += bits;
        peak_ = std::max(peak_, current_);
        if (enforce_ && current_ > budget_bits()) throw budget_exceeded(label, current_, budget_bits());
    }

    void discharge(std::uint64_t bits) {
        current_ -= std::min(current_, bits);
    }

    void audit(const char* label) const {
        if (enforce_ && current_ > budget_bits()) throw budget_exceeded(label, current_, budget_bits());
    }

    std::uint64_t charged_bits() const { return current_; }
    std::uint64_t peak_bits() const { return peak_; }
    bool enforcing() const { return enforce_; }

    class scoped_charge {
      public:
        scoped_charge(memory_accountant* acct, std::uint64_t bits, const char* label = "scoped")
            : acct_(acct), bits_(bits) {
            if (acct_) acct_->charge(bits_, label);
        }
        ~scoped_charge() {
            if (acct_) acct_->discharge(bits_);
        }
        scoped_charge(const scoped_charge&) = delete;
        scoped_charge& operator=(const scoped_charge&) = delete;

      private:
        memory_accountant* acct_;
        std::uint64_t bits_;
    };

  private:
    std::size_t n_ = 0;
    unsigned c_ = 4;
    std::size_t tau_ = 1;
    bool enforce_ = true;
    std::uint64_t current_ = 0;
    std::uint64_t peak_ = 0;
};

}  // namespace rpss
