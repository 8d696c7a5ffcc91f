use sqrteuler::ktheory::*;

fn main() {
    // K-model of Y=P4, V=O(1)+O(1), X=P2
    let k4 = kproj_space(4).unwrap();
    let k2 = kproj_space(2).unwrap();
    let emb = klinear(&k4, &k2).unwrap();
    let o1 = twist_line(&k4, 1).unwrap();
    let v = KBundle::new(&k4, vec![o1.clone(), o1.clone()]).unwrap();
    let f = KOrthBundle::hyperbolic(v);
    let n = KBundle::new(&k2, vec![twist_line(&k2, 1).unwrap(), twist_line(&k2, 1).unwrap()]).unwrap();
    let kbl = KBlowup::new(emb.clone(), n).unwrap();

    let xi = k4.one();
    let alpha = kbl.total().one();
    let beta = k2.zero();
    let got = sqrt_euler_k_localized(&f, &kbl, &xi, &alpha, &beta).unwrap();
    println!("sqrt_e_K(F,s)([O_Y]) on K(P2) = {}", got.render());
    // Lemma n44 K-analogue: ι_* of it = sqrt_e_K(F)·[O_Y]
    let pushed = emb.pushforward(&got);
    let direct = f.sqrt_euler().unwrap();
    println!("ι_* result  = {}", pushed.render());
    println!("√𝔢(F)·[O_Y] = {}", direct.render());
    println!("equal: {}", pushed == direct);
    // β-only route: √𝔢(F|_X)β
    let beta1 = k2.one();
    let xi2 = emb.pushforward(&beta1);
    let got2 = sqrt_euler_k_localized(&f, &kbl, &xi2, &kbl.total().zero(), &beta1).unwrap();
    let expect2 = f.restrict(&emb).unwrap().sqrt_euler().unwrap();
    println!("β-only equal: {}", got2 == expect2);
}
