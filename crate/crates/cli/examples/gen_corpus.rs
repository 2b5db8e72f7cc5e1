//! Regenerates the document corpus: `cargo run -p bpic-cli --example gen_corpus -- corpus`.

use std::path::Path;

use bpic::format::{holonomy_document, iso_document, isotropy_document, presentation_document, Document};
use bpic::groups::GroupDescriptor;
use bpic::presentation::{morita_check, SolveOptions};
use bpic::rational::Rational;
use bpic::{samples, Verdict};

fn write(dir: &Path, name: &str, doc: &Document) {
    std::fs::write(dir.join(name), doc.to_json() + "\n").expect("write corpus file");
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "corpus".into());
    let dir = Path::new(&dir);
    std::fs::create_dir_all(dir).expect("corpus directory");

    let presentations = [
        ("radko.json", samples::radko_sphere(r(5, 2))),
        ("blowup.json", samples::blowup(r(5, 2))),
        ("rho1.json", samples::radko_sphere(r(1, 1))),
        ("rho2.json", samples::radko_sphere(r(2, 1))),
        ("lefschetz.json", samples::lefschetz(0, r(1, 1))),
        ("parallel.json", samples::parallel_trivial(&[r(1, 1), r(2, 1), r(3, 1)])),
        ("path.json", samples::trivial_path(&[r(1, 1), r(1, 2), r(3, 1)])),
        ("cyclic.json", samples::one_edge(samples::cyclic_holonomy(3, r(7, 3)), "p", "q", "c")),
    ];
    for (name, p) in &presentations {
        write(dir, name, &presentation_document(p));
    }

    let z = GroupDescriptor::lattice(1);
    let plane = samples::isotropy(GroupDescriptor::Trivial, z.clone(), z, &[], &[]);
    write(dir, "plane_trivial_h.json", &isotropy_document(&plane));
    write(dir, "cylinder_trivial.json", &holonomy_document(&samples::trivial_holonomy(r(3, 2))));
    write(dir, "cylinder_lefschetz.json", &holonomy_document(&samples::lefschetz_holonomy(0, r(1, 1))));

    let (radko, blowup) = (&presentations[0].1, &presentations[1].1);
    match morita_check(blowup, radko, SolveOptions::default()).expect("morita check") {
        Verdict::Yes(f) => write(dir, "blowup_to_radko.json", &iso_document(&f, blowup, radko, "blowup.json", "radko.json")),
        other => panic!("blowup and Radko should be equivalent, got {other:?}"),
    }
}
