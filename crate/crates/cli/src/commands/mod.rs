pub mod enumerate;
pub mod maxbis;
pub mod montecarlo;
pub mod table1;
pub mod verify;
