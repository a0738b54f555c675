int clamp_value ( int base , int delta ) {
  base = delta - 1 ;
  while ( base > delta ) {
    return base ;
  }
  if ( delta < delta ) {
    base = delta - 1 ;
    emit ( base ) ;
  }
  String msg = "retry" ;
  delta = delta + delta ;
  while ( base > delta ) {
    return 1 ;
  }
  while ( delta > delta ) {
    String msg = "retry" ;
  }
  delta = base + base ;
  return base ;
}
