//! Holds the `acceptance` test target, which runs after the unit and property
//! suites of the other workspace members.
