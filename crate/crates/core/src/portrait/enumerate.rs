use rand::seq::SliceRandom;
use rand::Rng as _;

use super::Portrait;
use crate::rng::Rng;

/// A random portrait satisfying the incoming-edge bound, with at most
/// `max_post` finite postcritical points. Rejection sampling.
pub fn random_y_portrait(rng: &mut Rng, max_post: usize) -> Portrait {
    assert!(max_post >= 2);
    loop {
        // vertex 0 and 1 are critical; images are chosen from existing
        // vertices or a fresh one, so everything lies in a critical orbit
        let mut image: Vec<Option<usize>> = vec![None, None];
        let mut frontier = vec![0usize, 1];
        let limit = max_post + 2;
        while let Some(v) = frontier.pop() {
            let n = image.len();
            let fresh = n < limit && rng.gen_bool(0.55);
            let t = if fresh { n } else { rng.gen_range(0..n) };
            if t == n {
                image.push(None);
                frontier.push(n);
            }
            image[v] = Some(t);
        }
        let image: Vec<usize> = image.into_iter().map(|i| i.expect("assigned")).collect();
        let names: Vec<String> = (0..image.len())
            .map(|i| if i < 2 { format!("c{}", i + 1) } else { format!("p{}", i - 1) })
            .collect();
        let edges: Vec<(&str, &str, u8)> = (0..image.len())
            .map(|i| (names[i].as_str(), names[image[i]].as_str(), if i < 2 { 2 } else { 1 }))
            .collect();
        let Ok(p) = Portrait::from_edges(&edges) else { continue };
        if p.validate_y().valid && p.postcritical().len() <= max_post {
            return p;
        }
    }
}

/// The same portrait with vertex names replaced via a random bijection onto
/// `v0, v1, …`. Returns the portrait and the old-to-new name map.
pub fn relabel(p: &Portrait, rng: &mut Rng) -> (Portrait, Vec<(String, String)>) {
    let mut fresh: Vec<String> = (0..p.len()).map(|i| format!("v{i}")).collect();
    fresh.shuffle(rng);
    let edges: Vec<(String, String, u8)> = (0..p.len())
        .map(|v| (fresh[v].clone(), fresh[p.image(v)].clone(), p.deg(v)))
        .collect();
    let refs: Vec<(&str, &str, u8)> = edges
        .iter()
        .map(|(a, b, d)| (a.as_str(), b.as_str(), *d))
        .collect();
    let q = Portrait::from_edges(&refs).expect("relabeling preserves structure");
    let map = (0..p.len())
        .map(|v| (p.name(v).to_string(), fresh[v].clone()))
        .collect();
    (q, map)
}
