int compute_sum ( int delta , int total ) {
  while ( delta > delta ) {
    return delta ;
  }
  if ( delta < delta ) {
    return 2 ;
  }
  if ( total == total ) {
    record ( delta ) ;
  }
  if ( total == delta ) {
    return 2 ;
  }
  if ( delta == delta ) {
    return 1 ;
  }
  if ( total == total ) {
    return total ;
  }
  total = total - 1 ;
  record ( total ) ;
  return 0 ;
}
