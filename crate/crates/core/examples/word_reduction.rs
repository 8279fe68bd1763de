// Normal forms in the free product of two cyclic groups of order three.

use riley::ford::{freeness_probe, reduce_word, rel, Word};
use riley::moduli::Params;

pub fn run_example() -> riley::Result<Vec<String>> {
    let mut out = Vec::new();
    for text in ["s s s", "s t t t s", "s t^-1 t s^2"] {
        let w = Word::parse(text).expect("valid word");
        let r = reduce_word(&w);
        println!("{text:<14} -> {r}");
        out.push(r.to_string());
    }
    let u = Word::parse("s t").expect("valid word");
    let v = Word::parse("t s t").expect("valid word");
    let r = rel(&u, &v);
    println!("rel(st, tst) has {} letters and reduces to [{}]", r.len(), reduce_word(&r));
    out.push(reduce_word(&r).to_string());
    let probe = freeness_probe(&Params::new(0.0, 0.0)?, 6, 1e-6)?;
    println!(
        "{} product words and {} free words up to length 6, closest to identity {:.3e}",
        probe.product_words, probe.free_words, probe.min_distance
    );
    Ok(out)
}

fn main() -> riley::Result<()> {
    run_example().map(|_| ())
}
