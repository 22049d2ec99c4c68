//! Synthetic university graph in the style of the LUBM vocabulary.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Term;
use crate::eval::Graph;
use crate::surface::RdfTriple;

pub const DEPARTMENTS: usize = 5;
pub const PROFESSORS: usize = 6;
pub const STUDENTS: usize = 25;
pub const COURSES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EntityType {
    University,
    Department,
    Professor,
    Student,
    Course,
}

pub struct Predicate {
    pub name: &'static str,
    pub range: EntityType,
}

const fn pred(name: &'static str, range: EntityType) -> Predicate {
    Predicate { name, range }
}

impl EntityType {
    pub fn class_name(self) -> &'static str {
        match self {
            EntityType::University => "University",
            EntityType::Department => "Department",
            EntityType::Professor => "Professor",
            EntityType::Student => "Student",
            EntityType::Course => "Course",
        }
    }

    /// Predicates whose subjects have this type.
    pub fn outgoing(self) -> &'static [Predicate] {
        match self {
            EntityType::University => UNIVERSITY_OUT,
            EntityType::Department => DEPARTMENT_OUT,
            EntityType::Professor => PROFESSOR_OUT,
            EntityType::Student => STUDENT_OUT,
            EntityType::Course => COURSE_OUT,
        }
    }
}

const UNIVERSITY_OUT: &[Predicate] = &[pred("president", EntityType::Professor)];
const DEPARTMENT_OUT: &[Predicate] = &[
    pred("subOrganizationOf", EntityType::University),
    pred("head", EntityType::Professor),
];
const PROFESSOR_OUT: &[Predicate] = &[
    pred("workFor", EntityType::Department),
    pred("teachOf", EntityType::Course),
    pred("degreeFrom", EntityType::University),
];
const STUDENT_OUT: &[Predicate] = &[
    pred("advisor", EntityType::Professor),
    pred("takesCourse", EntityType::Course),
    pred("memberOf", EntityType::Department),
];
const COURSE_OUT: &[Predicate] = &[pred("offeredBy", EntityType::Department)];

/// Deterministic graph for `universities` universities (at least one).
///
/// Each university has a fixed number of departments, each with professors,
/// students and courses; random choices (advisors, enrolments, teaching,
/// degrees) come from `seed`, so the triple count grows linearly.
pub fn generate_graph(universities: usize, seed: u64) -> Graph {
    let universities = universities.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<RdfTriple> = Vec::new();
    fn iri(s: &str) -> Term {
        Term::iri(s)
    }
    let mut add = |s: &str, p: &str, o: Term| out.push((iri(s), iri(p), o));
    fn typed(add: &mut impl FnMut(&str, &str, Term), s: &str, class: EntityType) {
        add(s, crate::algebra::RDF_TYPE, iri(class.class_name()))
    }

    for u in 0..universities {
        let univ = format!("Univ{u}");
        typed(&mut add, &univ, EntityType::University);
        let president = format!("{univ}.Dept{}.Prof0", rng.random_range(0..DEPARTMENTS));
        add(&univ, "president", iri(&president));
        for d in 0..DEPARTMENTS {
            let dept = format!("{univ}.Dept{d}");
            typed(&mut add, &dept, EntityType::Department);
            add(&dept, "subOrganizationOf", iri(&univ));
            add(&dept, "head", iri(&format!("{dept}.Prof0")));
            let courses: Vec<String> = (0..COURSES).map(|c| format!("{dept}.Course{c}")).collect();
            let profs: Vec<String> = (0..PROFESSORS).map(|p| format!("{dept}.Prof{p}")).collect();
            for c in &courses {
                typed(&mut add, c, EntityType::Course);
                add(c, "offeredBy", iri(&dept));
            }
            for (i, p) in profs.iter().enumerate() {
                typed(&mut add, p, EntityType::Professor);
                add(p, "name", Term::literal(format!("Professor {i} of {dept}")));
                add(p, "workFor", iri(&dept));
                add(
                    p,
                    "degreeFrom",
                    iri(&format!("Univ{}", rng.random_range(0..universities))),
                );
                let n = rng.random_range(1..=2);
                for c in courses.choose_multiple(&mut rng, n) {
                    add(p, "teachOf", iri(c));
                }
            }
            for s in 0..STUDENTS {
                let student = format!("{dept}.Student{s}");
                typed(&mut add, &student, EntityType::Student);
                add(&student, "name", Term::literal(format!("Student {s} of {dept}")));
                add(&student, "memberOf", iri(&dept));
                if rng.random_bool(0.7) {
                    add(&student, "advisor", iri(profs.choose(&mut rng).expect("nonempty")));
                }
                let n = rng.random_range(1..=3);
                for c in courses.choose_multiple(&mut rng, n) {
                    add(&student, "takesCourse", iri(c));
                }
            }
        }
    }
    Graph::new(out).expect("generated triples are well-typed")
}
