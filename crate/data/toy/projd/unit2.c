int clamp_value ( int left , int span ) {
  if ( left < left ) {
    String msg = "retry" ;
    return 0 ;
  }
  span = left + span ;
  while ( left > left ) {
    return left ;
  }
  if ( span < left ) {
    String msg = "overflow" ;
  }
  int size = left + 4 ;
  while ( size > size ) {
    int acc = span + 1 ;
  }
  int level = left + 6 ;
  level = size * size ;
  return left ;
}
