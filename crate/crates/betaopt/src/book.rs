//! The guide's code blocks, compiled and run as doctests so the book in
//! `book/` can never drift from the library. One module per chapter keeps
//! failures attributable.

#[cfg(doctest)]
mod chapters {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            pub mod $name {}
        };
    }

    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(enclosures_and_words, "../../../book/src/enclosures-and-words.md");
    chapter!(maps_and_expansions, "../../../book/src/maps-and-expansions.md");
    chapter!(shifts_and_cylinders, "../../../book/src/shifts-and-cylinders.md");
    chapter!(orbits_and_brackets, "../../../book/src/orbits-and-brackets.md");
    chapter!(subactions, "../../../book/src/subactions.md");
    chapter!(shadowing_and_perturbation, "../../../book/src/shadowing-and-perturbation.md");
    chapter!(command_line, "../../../book/src/command-line.md");
}
