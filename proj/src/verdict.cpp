#include "sigmacat/verdict.hpp"

#include <sstream>
#include <stdexcept>

namespace sigmacat {

  Verdict Verdict::positive(std::string          subject,
                            std::vector<Witness> witnesses,
                            SearchStats          stats) {
    Verdict v;
    v._subject   = std::move(subject);
    v._witnesses = std::move(witnesses);
    v._stats     = stats;
    return v;
  }

  Verdict Verdict::negative(std::string    subject,
                            Counterexample counterexample,
                            SearchStats    stats) {
    Verdict v;
    v._subject        = std::move(subject);
    v._counterexample = std::move(counterexample);
    v._stats          = stats;
    return v;
  }

  std::vector<Witness> const& Verdict::witnesses() const {
    if (!_witnesses) {
      throw std::logic_error("negative verdict has no witnesses");
    }
    return *_witnesses;
  }

  Counterexample const& Verdict::counterexample() const {
    if (!_counterexample) {
      throw std::logic_error("positive verdict has no counterexample");
    }
    return *_counterexample;
  }

  void Verdict::add_part(Verdict part) {
    if (outcome() && !part.outcome()) {
      _counterexample = part.counterexample();
      _witnesses.reset();
    }
    _stats.instances += part._stats.instances;
    _stats.candidates += part._stats.candidates;
    _parts.push_back(std::move(part));
  }

  namespace {
    std::string join(std::vector<std::string> const& v) {
      std::string out;
      for (auto const& s : v) {
        if (!out.empty()) {
          out += ", ";
        }
        out += s;
      }
      return out;
    }
  }  // namespace

  std::string Verdict::to_string() const {
    std::ostringstream os;
    os << _subject << ": " << (outcome() ? "positive" : "negative");
    if (outcome()) {
      os << " (" << _witnesses->size() << " witnesses)";
    } else {
      os << "\n  condition: " << _counterexample->condition
         << "\n  instance: (" << join(_counterexample->instance) << ")"
         << "\n  searched: " << _counterexample->search_space;
    }
    for (auto const& n : _notes) {
      os << "\n  note: " << n;
    }
    return os.str();
  }

}  // namespace sigmacat
