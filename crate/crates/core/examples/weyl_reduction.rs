//! Reduces the classes F_t(Z) to the fundamental chamber (or shows they
//! are not effective) and prints the word that does it.

use fatpoints::lattice::FatPointScheme;
use fatpoints::weyl::reduce;

fn main() {
    let z: FatPointScheme = "77,77,77,77,77,77,77,44,11,11,11".parse().unwrap();
    for t in 208..=210 {
        let f = z.class_of(t);
        let r = reduce(&f);
        println!("F_{t} = {f}");
        println!("  -> {} [{:?}] after {} Cremona steps", r.reduced, r.status, r.word.cremona_count());
        // the word really carries f to the reduced class
        assert_eq!(r.word.apply(&f.pad_to(r.reduced.n())).unwrap(), r.reduced);
    }
}
