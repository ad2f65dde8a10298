#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace sigmacat {

  // One existential instance together with the data realizing it.
  struct Witness {
    std::string              condition;
    std::vector<std::string> instance;
    std::vector<std::string> data;

    bool operator==(Witness const&) const = default;
  };

  // The first universally quantified instance for which no witness exists.
  struct Counterexample {
    std::string              condition;
    std::vector<std::string> instance;
    std::string              search_space;

    bool operator==(Counterexample const&) const = default;
  };

  struct SearchStats {
    std::size_t instances  = 0;
    std::size_t candidates = 0;

    bool operator==(SearchStats const&) const = default;
  };

  // Outcome of a decision procedure. Exactly one of witnesses and
  // counterexample is populated, according to the outcome.
  class Verdict {
   public:
    static Verdict positive(std::string          subject,
                            std::vector<Witness> witnesses,
                            SearchStats          stats = {});
    static Verdict negative(std::string    subject,
                            Counterexample counterexample,
                            SearchStats    stats = {});

    bool outcome() const noexcept {
      return _witnesses.has_value();
    }
    explicit operator bool() const noexcept {
      return outcome();
    }

    std::string const& subject() const noexcept {
      return _subject;
    }
    std::vector<Witness> const&   witnesses() const;
    Counterexample const&         counterexample() const;
    SearchStats const&            stats() const noexcept {
      return _stats;
    }
    std::vector<Verdict> const& parts() const noexcept {
      return _parts;
    }
    std::vector<std::string> const& notes() const noexcept {
      return _notes;
    }

    // Attaches a sub-verdict; a negative part makes the whole negative.
    void add_part(Verdict part);
    void add_note(std::string note) {
      _notes.push_back(std::move(note));
    }

    std::string to_string() const;

    bool operator==(Verdict const&) const = default;

   private:
    Verdict() = default;

    std::string                         _subject;
    std::optional<std::vector<Witness>> _witnesses;
    std::optional<Counterexample>       _counterexample;
    SearchStats                         _stats;
    std::vector<Verdict>                _parts;
    std::vector<std::string>            _notes;
  };

}  // namespace sigmacat
