#pragma once

#include <string>
#include <vector>

namespace usfm::opl {

// One sentence shape per controlled-language production. can-be and state-set
// are textually the same production and share StateSet.
enum class SentenceKind {
    EssenceDecl,  // "X is physical." / "X is environmental and physical."
    StateSet,     // "X can be A, B, or C."
    StateFlag,    // "A is initial." / "A is final."
    ConsistsOf,   // "X consists of A and B."
    Exhibits,     // "X exhibits A and B."
    ZoomsInto,    // "X zooms into A and B."
    OccursIf,     // "P occurs if O is in existent."
    Requires,     // "P requires A and B."
    Consumes,     // "P consumes at S O and E."
    Yields,       // "P yields A and B."
    Affects,      // "P affects A."
    Handles,      // "H handles P."
    Changes,      // "P changes O from A to B and O2 from C to D."
};

std::string_view to_string(SentenceKind k);

struct Operand {
    std::string name;
    // Consumption only: source-state prefix resolved against the named
    // object's declared states ("at Screen Printer Baked Board").
    std::string state;
};

struct ChangeClause {
    std::string object;
    std::string from_state;
    std::string to_state;
};

struct Sentence {
    SentenceKind kind;
    int line = 0;
    std::string subject;
    std::vector<Operand> operands;
    std::vector<ChangeClause> clauses;   // Changes only
    bool declares_physical = false;      // EssenceDecl
    bool declares_environmental = false; // EssenceDecl
    bool flag_initial = false;           // StateFlag: true=initial, false=final
    std::string raw;                     // verbatim sentence text, terminator included
};

}  // namespace usfm::opl
