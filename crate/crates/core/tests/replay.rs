use jnc_core::matrix::{ReceptionMatrix, WORKED_EXAMPLE};
use jnc_core::protocols::Transmission;
use jnc_core::sim::{replay_matrix, replay_traced, Protocol};

#[test]
fn worked_example_gains() {
    let m: ReceptionMatrix = WORKED_EXAMPLE.parse().unwrap();
    assert_eq!(replay_matrix(&m, Protocol::Arq).retransmissions, 4);
    assert_eq!(replay_matrix(&m, Protocol::DncSim).retransmissions, 2);
    let (jnc, trace) = replay_traced(&m, Protocol::JncCr);
    assert_eq!(jnc.retransmissions, 1);
    assert_eq!(jnc.transmissions, 2);
    match &trace[0].tx {
        Transmission::Collision(jp) => assert_eq!(jp.display(m.b), "(c1⊕c2)⊙(c3⊕c4)"),
        other => panic!("expected a collision, got {other:?}"),
    }
}

#[test]
fn lossless_matrix_needs_nothing() {
    let m: ReceptionMatrix = "3 2 3\n1 0 0 0 0 0 0\n2 0 0 0 0 0 0\n3 0 0 0 - - -\n4 0 0 0 0 0 0\n5 0 0 0 0 0 0\n6 - - - 0 0 0\n".parse().unwrap();
    for p in [Protocol::Arq, Protocol::DncSim, Protocol::JncCr] {
        assert_eq!(replay_matrix(&m, p).retransmissions, 0);
    }
}
