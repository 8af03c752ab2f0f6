//! Holds the `acceptance` test target, which prints one verdict line per criterion.
